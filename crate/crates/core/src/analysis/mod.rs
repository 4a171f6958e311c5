//! Degree statistics, adaptive binning, histograms and scaling-law fits.

mod binning;
mod degrees;
mod fit;
mod histogram;

pub use binning::{adaptive_bin, Bin, BinnedDistribution, DEFAULT_THRESHOLD};
pub use degrees::{degree_counts, weighted_degree_counts, DegreeCounts};
pub use fit::{
    fit, fit_polylog, fit_powerlaw, fit_semilog, read_fits_csv, tail_exponent, write_fits_csv,
    FitForm, FitResult,
};
pub use histogram::{freedman_diaconis_width, value_histogram, Histogram};

/// Default start of the tail for exponent estimates: twice the mean degree.
pub fn default_tail_start(counts: &DegreeCounts) -> f64 {
    2.0 * counts.mean_degree()
}
