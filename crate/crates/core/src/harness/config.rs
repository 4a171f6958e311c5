//! Experiment configuration, read from TOML.
//!
//! ```toml
//! model = "copy"                  # pa | copy | alpha_pa | empty
//! sizes = [64, 128, 256, 512]     # strictly increasing
//! instances_per_size = 100
//! master_seed = 2013
//! alpha_g = 0.85                  # optional, default 0.85
//! s_t = 200                       # optional, adaptive-binning threshold
//! output_dir = "runs/copy"        # optional, default "out"
//! workers = 0                     # optional, 0 = all available threads
//!
//! # exactly one of [params] and [targets]
//! [params]                        # fields of the chosen model
//! m_x = 1
//! m_y = 1
//! p_x = 0.5
//! p_y = 0.5
//!
//! [targets]
//! gamma_in = 3.0
//! gamma_out = 3.0
//! mean_degree = 2.0
//!
//! [solver]                        # optional
//! mode = "dense"                  # dense | iterative | auto
//! tol = 1e-10
//! n_scan = 21
//! xtol = 1e-4
//! ftol = 1e-10
//! max_refine_iter = 200
//! ```
//!
//! Relative `output_dir` values are taken relative to the working directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::targets::{params_for_targets, ModelKind, Targets};
use crate::analysis::DEFAULT_THRESHOLD;
use crate::error::{invalid, Error, Result};
use crate::netgen::{AlphaPaParams, CopyParams, ModelParams, PaParams};
use crate::pagerank::DEFAULT_DAMPING;
use crate::spectral::{GapOptions, SolverMode};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: ModelKind,
    sizes: Vec<usize>,
    instances_per_size: usize,
    master_seed: u64,
    #[serde(default = "default_alpha_g")]
    alpha_g: f64,
    #[serde(default = "default_s_t")]
    s_t: u64,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    #[serde(default)]
    workers: usize,
    params: Option<toml::Value>,
    targets: Option<Targets>,
    #[serde(default)]
    solver: GapOptions,
}

fn default_alpha_g() -> f64 {
    DEFAULT_DAMPING
}

fn default_s_t() -> u64 {
    DEFAULT_THRESHOLD
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    /// Targets the parameters were solved from, if any.
    pub targets: Option<Targets>,
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub master_seed: u64,
    pub alpha_g: f64,
    pub solver: GapOptions,
    pub s_t: u64,
    pub output_dir: PathBuf,
    /// Worker threads; 0 means all available.
    pub workers: usize,
}

fn model_params(kind: ModelKind, value: toml::Value) -> std::result::Result<ModelParams, toml::de::Error> {
    Ok(match kind {
        ModelKind::Pa => ModelParams::Pa(value.try_into::<PaParams>()?),
        ModelKind::Copy => ModelParams::Copy(value.try_into::<CopyParams>()?),
        ModelKind::AlphaPa => ModelParams::AlphaPa(value.try_into::<AlphaPaParams>()?),
        ModelKind::Empty => ModelParams::Empty,
    })
}

impl ExperimentConfig {
    /// Desk-scale defaults around `params`: sizes 64..512, 100 instances.
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            targets: None,
            sizes: vec![64, 128, 256, 512],
            instances_per_size: 100,
            master_seed: 0,
            alpha_g: DEFAULT_DAMPING,
            solver: GapOptions::default(),
            s_t: DEFAULT_THRESHOLD,
            output_dir: default_output_dir(),
            workers: 0,
        }
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let parse = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            message,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| parse(e.to_string()))?;
        let (params, targets) = match (raw.params, raw.targets, raw.model) {
            (Some(_), Some(_), _) => {
                return Err(invalid("give either [params] or [targets], not both"))
            }
            (None, None, ModelKind::Empty) => (ModelParams::Empty, None),
            (None, None, _) => return Err(invalid("missing [params] or [targets]")),
            (Some(v), None, kind) => (model_params(kind, v).map_err(|e| parse(e.to_string()))?, None),
            (None, Some(t), kind) => (params_for_targets(kind, &t)?, Some(t)),
        };
        let cfg = Self {
            params,
            targets,
            sizes: raw.sizes,
            instances_per_size: raw.instances_per_size,
            master_seed: raw.master_seed,
            alpha_g: raw.alpha_g,
            solver: raw.solver,
            s_t: raw.s_t,
            output_dir: raw.output_dir,
            workers: raw.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?, path)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        if self.sizes.is_empty() {
            return Err(invalid("sizes must not be empty"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("sizes must be strictly increasing, got {:?}", self.sizes)));
        }
        let floor = self.params.min_nodes().max(2);
        if self.sizes[0] < floor {
            return Err(invalid(format!(
                "smallest size {} is below {floor} for model {}",
                self.sizes[0],
                self.params.tag()
            )));
        }
        if self.instances_per_size < 1 {
            return Err(invalid("instances_per_size must be at least 1"));
        }
        if !(self.alpha_g > 0.0 && self.alpha_g < 1.0) {
            return Err(invalid(format!("alpha_g must lie in (0, 1), got {}", self.alpha_g)));
        }
        if self.s_t < 1 {
            return Err(invalid("s_t must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.master_seed = s;
        }
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        if let Some(w) = workers {
            self.workers = w;
        }
        self
    }

    pub fn with_solver(mut self, mode: Option<SolverMode>) -> Self {
        if let Some(m) = mode {
            self.solver.mode = m;
        }
        self
    }

    pub fn with_output_dir(mut self, dir: Option<PathBuf>) -> Self {
        if let Some(d) = dir {
            self.output_dir = d;
        }
        self
    }

    /// Resolved worker count.
    pub fn effective_workers(&self) -> usize {
        if self.workers == 0 {
            crate::par::available_workers()
        } else {
            self.workers
        }
    }

    /// Rough single-thread wall time of the full sweep, in seconds, for the
    /// dense solver (about 1.4 s per instance at n = 512, cubic in n).
    pub fn estimated_seconds(&self) -> f64 {
        let per_instance: f64 = self
            .sizes
            .iter()
            .map(|&n| 1.4 * (n as f64 / 512.0).powi(3))
            .sum();
        per_instance * self.instances_per_size as f64
    }

    /// True beyond the desk schedule (n > 1024 or more than 100 instances).
    pub fn is_paper_scale(&self) -> bool {
        self.sizes.last().is_some_and(|&n| n > 1024) || self.instances_per_size > 100
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml_str(text, Path::new("test.toml"))
    }

    const COPY: &str = r#"
model = "copy"
sizes = [64, 128]
instances_per_size = 3
master_seed = 9

[params]
m_x = 1
m_y = 1
p_x = 0.5
p_y = 0.5
"#;

    #[test]
    fn explicit_params() {
        let c = parse(COPY).unwrap();
        assert_eq!(c.params, ModelParams::Copy(CopyParams::new(1, 0.5, 0.5)));
        assert_eq!(c.alpha_g, 0.85);
        assert_eq!(c.s_t, 200);
        assert_eq!(c.solver, GapOptions::default());
        assert_eq!(c.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn targets_are_solved() {
        let c = parse(
            r#"
model = "alpha_pa"
sizes = [64]
instances_per_size = 1
master_seed = 1
[targets]
gamma_in = 3.0
gamma_out = 3.0
mean_degree = 2.0
[solver]
mode = "iterative"
n_scan = 11
"#,
        )
        .unwrap();
        let ModelParams::AlphaPa(p) = c.params else { panic!() };
        assert!((p.alpha - 1.0).abs() < 1e-12);
        assert_eq!(c.solver.mode, SolverMode::Iterative);
        assert_eq!(c.solver.n_scan, 11);
        assert_eq!(c.solver.tol, 1e-10);
    }

    #[test]
    fn empty_model_needs_no_params() {
        let c = parse("model = \"empty\"\nsizes = [4]\ninstances_per_size = 1\nmaster_seed = 0\n")
            .unwrap();
        assert_eq!(c.params, ModelParams::Empty);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            COPY.replace("[64, 128]", "[128, 64]"),
            COPY.replace("[64, 128]", "[64, 64]"),
            COPY.replace("[64, 128]", "[]"),
            COPY.replace("instances_per_size = 3", "instances_per_size = 0"),
            COPY.replace("p_x = 0.5", "p_x = 1.5"),
            COPY.replace("master_seed = 9", "master_seed = 9\nalpha_g = 1.0"),
            COPY.replace("master_seed = 9", "master_seed = 9\nunknown = 1"),
            COPY.replace("p_y = 0.5", ""),
            COPY.replace("[params]", "[targets]\ngamma_in = 3.0\ngamma_out = 3.0\nmean_degree = 2.0\n[params]"),
            "model = \"pa\"\nsizes = [8]\ninstances_per_size = 1\nmaster_seed = 0\n".into(),
            "model = \"pa\"\nsizes = [8]\ninstances_per_size = 1\nmaster_seed = 0\n[targets]\ngamma_in = 2.5\ngamma_out = 3.0\nmean_degree = 2.0\n".into(),
            "not toml at all [".into(),
        ];
        for text in &cases {
            assert!(parse(text).is_err(), "accepted:\n{text}");
        }
    }

    #[test]
    fn overrides() {
        let c = parse(COPY)
            .unwrap()
            .with_seed(Some(5))
            .with_workers(Some(3))
            .with_solver(Some(SolverMode::Dense))
            .with_output_dir(Some("x".into()));
        assert_eq!(c.master_seed, 5);
        assert_eq!(c.workers, 3);
        assert_eq!(c.effective_workers(), 3);
        assert_eq!(c.solver.mode, SolverMode::Dense);
        assert_eq!(c.output_dir, PathBuf::from("x"));
        let same = parse(COPY).unwrap().with_seed(None).with_workers(None);
        assert_eq!(same, parse(COPY).unwrap());
    }

    #[test]
    fn scale_flag() {
        let mut c = ExperimentConfig::new(ModelParams::Empty);
        assert!(!c.is_paper_scale());
        c.sizes = vec![512, 8192];
        assert!(c.is_paper_scale());
        assert!(c.estimated_seconds() > 1000.0);
    }
}
