use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{AlphaPaParams, CopyParams, ModelParams, PaParams};

/// Model family, without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Pa,
    Copy,
    AlphaPa,
    Empty,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Pa => "pa",
            ModelKind::Copy => "copy",
            ModelKind::AlphaPa => "alpha_pa",
            ModelKind::Empty => "empty",
        }
    }
}

/// Desired degree tails and mean in-/out-degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Targets {
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub mean_degree: f64,
}

const EPS: f64 = 1e-9;

fn no_solution(msg: String) -> Error {
    Error::NoSolution(msg)
}

/// Composite models add `m_x + m_y = 2m` edges per vertex on average.
fn edges_per_component(mean_degree: f64) -> Result<usize> {
    let m = mean_degree / 2.0;
    let r = m.round();
    if r < 1.0 || (m - r).abs() > EPS {
        return Err(no_solution(format!(
            "mean degree {mean_degree} is not twice a positive integer"
        )));
    }
    Ok(r as usize)
}

/// Inverts the exponent relations of each model.
///
/// * copying: `p = (gamma - 2) / (gamma - 1)` per direction, `m = mean / 2`;
/// * α-PA: with `S = p1 + p2 = 1 / mean` and `c = S alpha`,
///   `p1 = (gamma_out - 2 - c) / (gamma_out - 1)`,
///   `p2 = (gamma_in - 2 - c) / (gamma_in - 1)`, and `c` follows from the
///   sum constraint;
/// * preferential attachment: only `gamma = 3`.
pub fn params_for_targets(model: ModelKind, t: &Targets) -> Result<ModelParams> {
    let Targets {
        gamma_in,
        gamma_out,
        mean_degree,
    } = *t;
    if ![gamma_in, gamma_out, mean_degree].iter().all(|v| v.is_finite()) || mean_degree <= 0.0 {
        return Err(no_solution(format!("targets must be finite with positive mean, got {t:?}")));
    }
    match model {
        ModelKind::Pa => {
            if (gamma_in - 3.0).abs() > EPS || (gamma_out - 3.0).abs() > EPS {
                return Err(Error::UnsupportedTarget(format!(
                    "preferential attachment only yields gamma = 3, asked for ({gamma_in}, {gamma_out})"
                )));
            }
            let m = edges_per_component(mean_degree)?;
            Ok(ModelParams::Pa(PaParams::new(m, m)))
        }
        ModelKind::Copy => {
            if gamma_in <= 2.0 || gamma_out <= 2.0 {
                return Err(no_solution(format!(
                    "copying needs gamma > 2, got ({gamma_in}, {gamma_out})"
                )));
            }
            let m = edges_per_component(mean_degree)?;
            let p_x = (gamma_in - 2.0) / (gamma_in - 1.0);
            let p_y = (gamma_out - 2.0) / (gamma_out - 1.0);
            Ok(ModelParams::Copy(CopyParams::new(m, p_x, p_y)))
        }
        ModelKind::AlphaPa => {
            if gamma_in <= 1.0 || gamma_out <= 1.0 {
                return Err(no_solution(format!(
                    "alpha-PA needs gamma > 1, got ({gamma_in}, {gamma_out})"
                )));
            }
            let s = 1.0 / mean_degree;
            let a = (gamma_out - 2.0) / (gamma_out - 1.0) + (gamma_in - 2.0) / (gamma_in - 1.0);
            let b = 1.0 / (gamma_out - 1.0) + 1.0 / (gamma_in - 1.0);
            let c = (a - s) / b;
            let p1 = (gamma_out - 2.0 - c) / (gamma_out - 1.0);
            let p2 = (gamma_in - 2.0 - c) / (gamma_in - 1.0);
            let params = AlphaPaParams::new(p1, p2, c / s);
            if c < 0.0 || params.validate().is_err() {
                return Err(no_solution(format!(
                    "alpha-PA system infeasible for {t:?}: p1 = {p1}, p2 = {p2}, alpha = {}",
                    c / s
                )));
            }
            Ok(ModelParams::AlphaPa(params))
        }
        ModelKind::Empty => Err(Error::UnsupportedTarget(
            "the empty model has no degree targets".into(),
        )),
    }
}
