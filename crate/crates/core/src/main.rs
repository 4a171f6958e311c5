use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pagegap::analysis::{adaptive_bin, default_tail_start, read_fits_csv, tail_exponent, FitResult};
use pagegap::harness::{
    self, derive_seed, emit_outputs, fit_summaries, largest_size_histogram, load_records,
    pooled_degrees, presets, read_summary_csv, run_experiment_with, summarize, ExperimentConfig,
    FITS_FILE, HISTOGRAM_FILE, RECORDS_FILE, SUMMARY_FILE,
};
use pagegap::netgen::{generate, ModelParams, SimpleDigraph};
use pagegap::pagerank::{google_matrix, DEFAULT_DAMPING};
use pagegap::spectral::{min_gap, GapOptions, SolverMode};
use pagegap::{Error, Result};

#[derive(Parser)]
#[command(name = "pagegap", version, about = "Spectral-gap sweeps over scale-free digraph ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow graphs and write them as edge lists
    Generate(GenerateArgs),
    /// Minimum gap of one edge-list graph, printed as JSON
    Gap(GapArgs),
    /// Run a full experiment and write records, summary, fits and plot
    Sweep(SweepArgs),
    /// Summaries and histograms from records; pooled degree distributions
    Analyze(AnalyzeArgs),
    /// Fit the three scaling forms to a summary
    Fit(FitArgs),
    /// Render a summary and its fits as SVG
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Dense,
    Iterative,
}

impl From<Solver> for SolverMode {
    fn from(s: Solver) -> Self {
        match s {
            Solver::Dense => SolverMode::Dense,
            Solver::Iterative => SolverMode::Iterative,
        }
    }
}

#[derive(Args)]
struct ModelSource {
    /// TOML experiment configuration
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named parameter set: pa, copy, alpha-pa, copy-web, alpha-pa-web, empty
    #[arg(long)]
    preset: Option<String>,
}

impl ModelSource {
    fn load(&self) -> Result<ExperimentConfig> {
        match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path),
            (None, Some(name)) => Ok(ExperimentConfig::new(presets::by_name(name)?)),
            (None, None) => Err(Error::InvalidParameter("give --config or --preset".into())),
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Number of graphs, with instance ids 0..count
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    /// Edge-list file
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    alpha_g: f64,
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    #[arg(long, default_value_t = 21)]
    n_scan: usize,
    /// Include every probed (s, delta) pair in the output
    #[arg(long)]
    trace: bool,
    /// Also write gap.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Comma-separated sizes, overriding the configuration
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only write records
    #[arg(long)]
    no_outputs: bool,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Records file; defaults to records.jsonl under --out
    #[arg(long)]
    records: Option<PathBuf>,
    #[command(flatten)]
    source: ModelSource,
    /// Also pool degree distributions of graphs of this size
    #[arg(long)]
    degrees_n: Option<usize>,
    /// Graphs pooled for --degrees-n
    #[arg(long, default_value_t = 100)]
    graphs: usize,
    /// Count degrees on growth multigraphs (with multiplicity) instead of the
    /// final simple graphs
    #[arg(long)]
    weighted: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    summary: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    summary: PathBuf,
    /// Fits file; defaults to fits.csv next to the summary
    #[arg(long)]
    fits: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parent_dir(p: &Path) -> PathBuf {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let cfg = a.source.load()?.with_seed(a.seed);
    let out = a.out.unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out)?;
    for id in 0..a.count {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.master_seed, a.n, id));
        let g = generate(&cfg.params, a.n, &mut rng)?;
        let path = out.join(format!("graph_n{}_{id}.txt", a.n));
        g.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_gap(a: GapArgs) -> Result<()> {
    let g = SimpleDigraph::load(&a.graph)?;
    let gm = google_matrix(&g, a.alpha_g)?;
    let mut opts = GapOptions {
        n_scan: a.n_scan,
        ..GapOptions::default()
    };
    if let Some(s) = a.solver {
        opts.mode = s.into();
    }
    let mut r = min_gap(&gm, &opts)?;
    if !a.trace {
        r.evaluations.clear();
    }
    let text = serde_json::to_string_pretty(&r)? + "\n";
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("gap.json"), &text)?;
    }
    print!("{text}");
    Ok(())
}

fn write_analysis(dir: &Path, records: &[harness::RunRecord], plot: bool) -> Result<Vec<FitResult>> {
    let summaries = summarize(records)?;
    let (_, hist) = largest_size_histogram(records)?;
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    hist.write_csv(&mut buf)?;
    fs::write(dir.join(HISTOGRAM_FILE), buf)?;
    let fits = if summaries.len() >= 2 {
        fit_summaries(&summaries)?
    } else {
        Vec::new()
    };
    emit_outputs(dir, &summaries, &fits, plot)?;
    Ok(fits)
}

fn print_fits(fits: &[FitResult]) {
    for f in fits {
        println!(
            "{:<8} a = {:<12.6} b = {:<12.6} rms residual = {:.4e}",
            f.form.as_str(),
            f.a,
            f.b,
            f.residual
        );
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let mut cfg = a
        .source
        .load()?
        .with_seed(a.seed)
        .with_workers(a.workers)
        .with_solver(a.solver.map(Into::into))
        .with_output_dir(a.out);
    if let Some(s) = a.sizes {
        cfg.sizes = s;
    }
    if let Some(i) = a.instances {
        cfg.instances_per_size = i;
    }
    cfg.validate()?;
    if cfg.is_paper_scale() {
        eprintln!(
            "warning: paper-scale schedule; dense-solver estimate {:.1} h on one thread",
            cfg.estimated_seconds() / 3600.0
        );
    }
    let total = cfg.sizes.len() * cfg.instances_per_size;
    let mut seen = 0usize;
    let quiet = a.quiet;
    let report = run_experiment_with(&cfg, |r| {
        seen += 1;
        if !quiet {
            match (&r.error_class, r.inverse_delta) {
                (Some(c), _) => eprintln!("[{seen}] n={} id={} error {c}", r.n, r.instance_id),
                (None, Some(v)) => eprintln!(
                    "[{seen}] n={} id={} 1/delta={v:.4} s*={:.4} {:.2}s",
                    r.n,
                    r.instance_id,
                    r.s_star.unwrap_or(f64::NAN),
                    r.wall_time
                ),
                _ => {}
            }
        }
    })?;
    println!(
        "{}: {} computed, {} already recorded, {total} in schedule",
        report.records_path.display(),
        report.computed,
        report.skipped
    );
    if !a.no_outputs {
        let fits = write_analysis(&cfg.output_dir, &report.records, true)?;
        print_fits(&fits);
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let records_path = a
        .records
        .clone()
        .or_else(|| a.out.as_ref().map(|d| d.join(RECORDS_FILE)));
    let out = a
        .out
        .clone()
        .or_else(|| a.records.as_deref().map(parent_dir))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Some(path) = records_path {
        if a.records.is_some() || path.exists() {
            let records = load_records(&path)?;
            write_analysis(&out, &records, false)?;
            println!("{}", out.join(SUMMARY_FILE).display());
        }
    }
    if let Some(n) = a.degrees_n {
        let cfg = a.source.load()?.with_seed(a.seed);
        degree_report(&cfg.params, n, a.graphs, cfg.master_seed, a.weighted, cfg.s_t, &out)?;
    }
    Ok(())
}

fn degree_report(
    params: &ModelParams,
    n: usize,
    graphs: usize,
    seed: u64,
    weighted: bool,
    s_t: u64,
    out: &Path,
) -> Result<()> {
    let (ins, outs) = pooled_degrees(params, n, graphs, seed, weighted)?;
    fs::create_dir_all(out)?;
    for counts in [&ins, &outs] {
        let dir = counts.direction.as_str();
        let binned = adaptive_bin(counts, s_t)?;
        let mut buf = Vec::new();
        binned.write_csv(&mut buf)?;
        fs::write(out.join(format!("degrees_{dir}.csv")), buf)?;
        let k_min = default_tail_start(counts);
        match tail_exponent(&binned, k_min) {
            Ok(g) => println!(
                "{dir}-degree: mean {:.4}, tail exponent {g:.3} (k >= {k_min:.2})",
                counts.mean_degree()
            ),
            Err(e) => println!("{dir}-degree: mean {:.4}, tail exponent unavailable: {e}", counts.mean_degree()),
        }
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<()> {
    let summaries = read_summary_csv(fs::File::open(&a.summary)?)?;
    let fits = fit_summaries(&summaries)?;
    let out = a.out.unwrap_or_else(|| parent_dir(&a.summary));
    fs::create_dir_all(&out)?;
    let mut buf = Vec::new();
    pagegap::analysis::write_fits_csv(&fits, &mut buf)?;
    fs::write(out.join(FITS_FILE), buf)?;
    print_fits(&fits);
    Ok(())
}

fn cmd_plot(a: PlotArgs) -> Result<()> {
    let summaries = read_summary_csv(fs::File::open(&a.summary)?)?;
    let fits_path = a.fits.unwrap_or_else(|| parent_dir(&a.summary).join(FITS_FILE));
    let fits = read_fits_csv(fs::File::open(&fits_path)?)?;
    let out = a.out.unwrap_or_else(|| parent_dir(&a.summary));
    fs::create_dir_all(&out)?;
    let path = out.join(harness::PLOT_FILE);
    fs::write(&path, harness::render_svg(&summaries, &fits))?;
    println!("{}", path.display());
    Ok(())
}

/// Argument combinations clap cannot express; reported as usage errors.
fn usage_problem(cmd: &Command) -> Option<&'static str> {
    let missing = |s: &ModelSource| s.config.is_none() && s.preset.is_none();
    match cmd {
        Command::Generate(a) if missing(&a.source) => Some("generate needs --config or --preset"),
        Command::Sweep(a) if missing(&a.source) => Some("sweep needs --config or --preset"),
        Command::Analyze(a) if a.records.is_none() && a.out.is_none() && a.degrees_n.is_none() => {
            Some("analyze needs --records, --out or --degrees-n")
        }
        Command::Analyze(a) if a.degrees_n.is_some() && missing(&a.source) => {
            Some("--degrees-n needs --config or --preset")
        }
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    if let Some(msg) = usage_problem(&cli.command) {
        eprintln!("error: {msg}\n\nFor more information, try '--help'.");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Gap(a) => cmd_gap(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
