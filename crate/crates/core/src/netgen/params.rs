use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Composite preferential attachment: `m_x` out-edges per new vertex in X,
/// `m_y` in-edges per new vertex in Y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaParams {
    pub m_x: usize,
    pub m_y: usize,
    /// Permits `m_x != m_y`, which yields offset (non-scale-free over a wide
    /// range) degree distributions.
    #[serde(default)]
    pub distorted: bool,
}

/// Composite copying model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopyParams {
    pub m_x: usize,
    pub m_y: usize,
    /// Probability that a new vertex of X links uniformly at random instead
    /// of copying its star vertex.
    pub p_x: f64,
    pub p_y: f64,
}

/// α-preferential attachment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaPaParams {
    /// Probability of a new vertex with one outgoing edge.
    pub p1: f64,
    /// Probability of a new vertex with one incoming edge.
    pub p2: f64,
    /// Attachment offset added to every degree weight.
    pub alpha: f64,
}

/// Tail exponents of the in- and out-degree distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub gamma_in: f64,
    pub gamma_out: f64,
}

/// Growth model together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    Pa(PaParams),
    Copy(CopyParams),
    AlphaPa(AlphaPaParams),
    /// Graph without edges; every vertex dangling. Useful as a degenerate
    /// control where `G` coincides with the complete reference.
    Empty,
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0, 1), got {p}")))
    }
}

impl PaParams {
    pub fn new(m_x: usize, m_y: usize) -> Self {
        Self {
            m_x,
            m_y,
            distorted: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_x < 1 || self.m_y < 1 {
            return Err(invalid("m_x and m_y must be at least 1"));
        }
        if self.m_x != self.m_y && !self.distorted {
            return Err(invalid(format!(
                "composite graph needs m_x = m_y (got {} and {}); set `distorted` to allow",
                self.m_x, self.m_y
            )));
        }
        Ok(())
    }
}

impl CopyParams {
    pub fn new(m: usize, p_x: f64, p_y: f64) -> Self {
        Self {
            m_x: m,
            m_y: m,
            p_x,
            p_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_x < 1 || self.m_y < 1 {
            return Err(invalid("m_x and m_y must be at least 1"));
        }
        if self.m_x != self.m_y {
            return Err(invalid(format!(
                "copying composite needs m_x = m_y (got {} and {})",
                self.m_x, self.m_y
            )));
        }
        check_probability("p_x", self.p_x)?;
        check_probability("p_y", self.p_y)
    }
}

impl AlphaPaParams {
    pub fn new(p1: f64, p2: f64, alpha: f64) -> Self {
        Self { p1, p2, alpha }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)?;
        if self.p1 + self.p2 > 1.0 + 1e-12 {
            return Err(invalid(format!(
                "p1 + p2 must not exceed 1, got {}",
                self.p1 + self.p2
            )));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(invalid(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        Ok(())
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Pa(p) => p.validate(),
            ModelParams::Copy(p) => p.validate(),
            ModelParams::AlphaPa(p) => p.validate(),
            ModelParams::Empty => Ok(()),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ModelParams::Pa(_) => "pa",
            ModelParams::Copy(_) => "copy",
            ModelParams::AlphaPa(_) => "alpha_pa",
            ModelParams::Empty => "empty",
        }
    }

    /// Compact `key=value` list, `;`-separated so it survives inside CSV.
    pub fn echo(&self) -> String {
        match self {
            ModelParams::Pa(p) => format!("m_x={};m_y={}", p.m_x, p.m_y),
            ModelParams::Copy(p) => {
                format!("m_x={};m_y={};p_x={};p_y={}", p.m_x, p.m_y, p.p_x, p.p_y)
            }
            ModelParams::AlphaPa(p) => format!("p1={};p2={};alpha={}", p.p1, p.p2, p.alpha),
            ModelParams::Empty => String::new(),
        }
    }

    /// Smallest admissible graph size for this model.
    pub fn min_nodes(&self) -> usize {
        match self {
            ModelParams::Pa(p) => p.m_x.max(p.m_y) + 1,
            ModelParams::Copy(p) => p.m_x.max(p.m_y) + 1,
            ModelParams::AlphaPa(_) => 2,
            ModelParams::Empty => 1,
        }
    }
}

/// Closed-form tail exponents for a parameter set.
pub fn predicted_exponents(params: &ModelParams) -> Result<ExponentPair> {
    params.validate()?;
    match params {
        ModelParams::Pa(p) => {
            if p.m_x != p.m_y {
                return Err(Error::UndefinedDomain(
                    "offset composite has no single tail exponent; see composite_offset_prediction"
                        .into(),
                ));
            }
            Ok(ExponentPair {
                gamma_in: 3.0,
                gamma_out: 3.0,
            })
        }
        ModelParams::Copy(p) => Ok(ExponentPair {
            gamma_in: (2.0 - p.p_x) / (1.0 - p.p_x),
            gamma_out: (2.0 - p.p_y) / (1.0 - p.p_y),
        }),
        ModelParams::AlphaPa(p) => {
            let shift = (p.p1 + p.p2) * p.alpha;
            Ok(ExponentPair {
                gamma_in: (2.0 + shift - p.p2) / (1.0 - p.p2),
                gamma_out: (2.0 + shift - p.p1) / (1.0 - p.p1),
            })
        }
        ModelParams::Empty => Err(Error::UndefinedDomain(
            "empty graphs have no degree tail".into(),
        )),
    }
}

/// Which degree a distribution refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    In,
    Out,
    Total,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
            Direction::Total => "total",
        }
    }
}

/// Unnormalised offset power law `(k + m_x - m_y)^-3` (in-degree) or
/// `(k - m_x + m_y)^-3` (out-degree) for composite preferential attachment.
pub fn composite_offset_prediction(
    m_x: usize,
    m_y: usize,
    k: f64,
    direction: Direction,
) -> Result<f64> {
    let offset = m_x as f64 - m_y as f64;
    let base = match direction {
        Direction::In => k + offset,
        Direction::Out => k - offset,
        Direction::Total => {
            return Err(Error::UndefinedDomain(
                "offset form is defined for in- or out-degree only".into(),
            ))
        }
    };
    if !(base > 0.0) {
        return Err(Error::UndefinedDomain(format!(
            "k = {k} gives non-positive base {base}"
        )));
    }
    Ok(base.powi(-3))
}
