//! Configuration-driven ensemble sweeps: deterministic seeding, parallel
//! execution at instance granularity, resumable record files, summaries,
//! fits and plots.

mod config;
mod output;
pub mod presets;
mod record;
mod seed;
mod summary;
mod sweep;
mod targets;

pub use config::ExperimentConfig;
pub use output::{emit_outputs, render_svg, FITS_FILE, PLOT_FILE, SUMMARY_FILE};
pub use record::{load_records, read_records, write_records, RunRecord, STATUS_ERROR, STATUS_OK};
pub use seed::derive_seed;
pub use summary::{
    fit_summaries, largest_size_histogram, read_summary_csv, summarize, write_summary_csv,
    SizeSummary, HISTOGRAM_FILE,
};
pub use sweep::{
    inverse_deltas_by_size, pooled_degrees, run_experiment, run_experiment_with, run_instance,
    SweepReport, RECORDS_FILE, TIMINGS_FILE,
};
pub use targets::{params_for_targets, ModelKind, Targets};
