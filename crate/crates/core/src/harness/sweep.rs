use std::collections::{BTreeMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::record::{load_records, write_records, RunRecord, STATUS_ERROR, STATUS_OK};
use super::seed::derive_seed;
use crate::analysis::{weighted_degree_counts, degree_counts, DegreeCounts};
use crate::error::{invalid, Error, Result};
use crate::netgen::{generate, generate_multigraph, Direction, ModelParams};
use crate::pagerank::google_matrix;
use crate::spectral::{min_gap, GapOptions};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const TIMINGS_FILE: &str = "timings.csv";

/// What a sweep did.
#[derive(Debug, Clone)]
pub struct SweepReport {
    /// All records in the output file, sorted by `(n, instance_id)`.
    pub records: Vec<RunRecord>,
    /// Instances computed in this invocation.
    pub computed: usize,
    /// Instances found already recorded and skipped.
    pub skipped: usize,
    pub records_path: PathBuf,
}

/// Generates, solves and records one instance. Failures become error rows.
pub fn run_instance(
    params: &ModelParams,
    alpha_g: f64,
    solver: &GapOptions,
    master_seed: u64,
    n: usize,
    instance_id: usize,
) -> RunRecord {
    let seed = derive_seed(master_seed, n, instance_id);
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate(params, n, &mut rng)?;
        let gm = google_matrix(&g, alpha_g)?;
        min_gap(&gm, solver)
    })();
    let mut rec = RunRecord {
        model: params.tag().into(),
        params: params.echo(),
        n,
        instance_id,
        seed,
        status: STATUS_OK.into(),
        error_class: None,
        error: None,
        delta: None,
        inverse_delta: None,
        s_star: None,
        lambda0: None,
        lambda1: None,
        solver: solver.mode.resolve(n).as_str().into(),
        wall_time: 0.0,
    };
    match outcome {
        Ok(r) if r.delta > 0.0 => {
            rec.delta = Some(r.delta);
            rec.inverse_delta = Some(1.0 / r.delta);
            rec.s_star = Some(r.s_star);
            rec.lambda0 = Some(r.lambda0);
            rec.lambda1 = Some(r.lambda1);
            rec.solver = r.mode.as_str().into();
        }
        Ok(r) => {
            rec.status = STATUS_ERROR.into();
            rec.error_class = Some("zero-gap".into());
            rec.error = Some(format!("minimum gap {} at s = {}", r.delta, r.s_star));
        }
        Err(e) => {
            rec.status = STATUS_ERROR.into();
            rec.error_class = Some(e.class().into());
            rec.error = Some(e.to_string());
        }
    }
    rec.wall_time = start.elapsed().as_secs_f64();
    rec
}

fn rewrite_sorted(path: &Path, records: &mut [RunRecord]) -> Result<()> {
    records.sort_by_key(|r| r.key());
    let tmp = path.with_extension("jsonl.tmp");
    {
        let f = fs::File::create(&tmp)?;
        write_records(records, std::io::BufWriter::new(f))?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs every `(n, instance_id)` of `config` not yet present in
/// `output_dir/records.jsonl`, calling `on_record` as results arrive.
///
/// Records are appended in completion order while the sweep runs, so an
/// interrupted sweep keeps its progress; on completion the file is rewritten
/// sorted by `(n, instance_id)`. Per-instance wall times are appended to
/// `timings.csv`.
pub fn run_experiment_with<F>(config: &ExperimentConfig, mut on_record: F) -> Result<SweepReport>
where
    F: FnMut(&RunRecord),
{
    config.validate()?;
    fs::create_dir_all(&config.output_dir)?;
    let path = config.output_dir.join(RECORDS_FILE);
    let mut records = if path.exists() { load_records(&path)? } else { Vec::new() };

    let (tag, echo) = (config.params.tag(), config.params.echo());
    if let Some(r) = records.iter().find(|r| r.model != tag || r.params != echo) {
        return Err(invalid(format!(
            "{} holds records for {} ({}), not {tag} ({echo})",
            path.display(),
            r.model,
            r.params
        )));
    }
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    records.retain(|r| done.insert(r.key()));
    // drops any truncated tail before appending
    rewrite_sorted(&path, &mut records)?;

    let tasks: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.instances_per_size).map(move |id| (n, id)))
        .filter(|k| !done.contains(k))
        .collect();
    let skipped = config.sizes.len() * config.instances_per_size - tasks.len();
    let computed = tasks.len();

    let mut out = OpenOptions::new().append(true).open(&path)?;
    let timings_path = config.output_dir.join(TIMINGS_FILE);
    let fresh_timings = !timings_path.exists();
    let mut timings = OpenOptions::new().create(true).append(true).open(&timings_path)?;
    if fresh_timings {
        timings.write_all(b"n,instance_id,wall_time\n")?;
    }

    let mut io_error: Option<Error> = None;
    let (params, solver) = (config.params, config.solver);
    crate::par::for_each_streamed(
        tasks,
        config.effective_workers(),
        |(n, id)| run_instance(&params, config.alpha_g, &solver, config.master_seed, n, id),
        |rec| {
            if io_error.is_none() {
                let written = rec.to_line().and_then(|line| {
                    out.write_all(line.as_bytes())?;
                    out.flush()?;
                    writeln!(timings, "{},{},{:.6}", rec.n, rec.instance_id, rec.wall_time)?;
                    Ok(())
                });
                if let Err(e) = written {
                    io_error = Some(e);
                }
            }
            on_record(&rec);
            records.push(rec);
        },
    );
    if let Some(e) = io_error {
        return Err(e);
    }
    drop(out);
    rewrite_sorted(&path, &mut records)?;
    Ok(SweepReport {
        records,
        computed,
        skipped,
        records_path: path,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepReport> {
    run_experiment_with(config, |_| {})
}

/// Pooled in- and out-degree counts over `count` graphs of size `n`, grown
/// with the same derived seeds a sweep would use. With `weighted`, degrees
/// are read from the growth multigraphs (multiplicity counted, loops
/// ignored); otherwise from the final simple graphs.
pub fn pooled_degrees(
    params: &ModelParams,
    n: usize,
    count: usize,
    master_seed: u64,
    weighted: bool,
) -> Result<(DegreeCounts, DegreeCounts)> {
    if count == 0 {
        return Err(Error::EmptyInput("no graphs requested".into()));
    }
    let ids: Vec<usize> = (0..count).collect();
    let per_graph = crate::par::map_collect(&ids, |&id| -> Result<(DegreeCounts, DegreeCounts)> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, n, id));
        if weighted {
            let g = generate_multigraph(params, n, &mut rng)?;
            Ok((
                weighted_degree_counts([&g], Direction::In)?,
                weighted_degree_counts([&g], Direction::Out)?,
            ))
        } else {
            let g = generate(params, n, &mut rng)?;
            Ok((degree_counts([&g], Direction::In)?, degree_counts([&g], Direction::Out)?))
        }
    });
    let mut ins = DegreeCounts::new(Direction::In);
    let mut outs = DegreeCounts::new(Direction::Out);
    for r in per_graph {
        let (a, b) = r?;
        ins.merge(&a);
        outs.merge(&b);
    }
    Ok((ins, outs))
}

/// Groups successful records by size, preserving record order within a size.
pub fn inverse_deltas_by_size(records: &[RunRecord]) -> BTreeMap<usize, Vec<f64>> {
    let mut by: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        if let Some(v) = r.inverse_delta {
            by.entry(r.n).or_default().push(v);
        }
    }
    by
}
