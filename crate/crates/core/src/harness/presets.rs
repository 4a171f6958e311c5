//! Named parameter sets used throughout the study.

use super::targets::{params_for_targets, ModelKind, Targets};
use crate::error::{invalid, Result};
use crate::netgen::{AlphaPaParams, CopyParams, ModelParams, PaParams};

/// `gamma_in = 2.1`, `gamma_out = 2.72`, mean degree 2.
pub const WEB_TARGETS: Targets = Targets {
    gamma_in: 2.1,
    gamma_out: 2.72,
    mean_degree: 2.0,
};

/// Composite preferential attachment, `m_x = m_y = 1` (gamma = 3).
pub fn pa() -> ModelParams {
    ModelParams::Pa(PaParams::new(1, 1))
}

/// Copying, `p_x = p_y = 0.5`, `m = 1` (gamma = 3).
pub fn copy() -> ModelParams {
    ModelParams::Copy(CopyParams::new(1, 0.5, 0.5))
}

/// α-PA, `p1 = p2 = 0.25`, `alpha = 1` (gamma = 3).
pub fn alpha_pa() -> ModelParams {
    ModelParams::AlphaPa(AlphaPaParams::new(0.25, 0.25, 1.0))
}

/// Copying with web-like tails: `p_x = 1/11`, `p_y = 35/86`.
///
/// `p_y = 35/86` predicts `gamma_out = 137/51 ≈ 2.686`, not 2.72 exactly;
/// the solved value for 2.72 would be `18/43`.
pub fn copy_web() -> ModelParams {
    ModelParams::Copy(CopyParams::new(1, 1.0 / 11.0, 35.0 / 86.0))
}

/// α-PA solved for [`WEB_TARGETS`] (about `p1 = 0.415`, `p2 = 0.0851`,
/// `alpha = 0.0128`).
pub fn alpha_pa_web() -> ModelParams {
    params_for_targets(ModelKind::AlphaPa, &WEB_TARGETS).expect("web targets are feasible")
}

pub const NAMES: [&str; 6] = ["pa", "copy", "alpha-pa", "copy-web", "alpha-pa-web", "empty"];

pub fn by_name(name: &str) -> Result<ModelParams> {
    Ok(match name {
        "pa" => pa(),
        "copy" => copy(),
        "alpha-pa" => alpha_pa(),
        "copy-web" => copy_web(),
        "alpha-pa-web" => alpha_pa_web(),
        "empty" => ModelParams::Empty,
        _ => {
            return Err(invalid(format!(
                "unknown preset {name:?}; expected one of {}",
                NAMES.join(", ")
            )))
        }
    })
}
