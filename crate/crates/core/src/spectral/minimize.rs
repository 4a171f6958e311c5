//! Gap evaluation and its minimisation over the interpolation parameter.
//!
//! `min_gap` scans an inclusive uniform grid on `[0, 1]` and then refines
//! from the best grid point with a one-dimensional Nelder-Mead simplex whose
//! trial points are clamped to the interval. No randomness is involved.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{complete_reference, dense_h, interpolated};
use super::{dense_two_lowest, psd_floor, smallest_pair, SolverMode};
use crate::error::{invalid, Error, Result};
use crate::pagerank::GoogleMatrix;

/// Gap values closer than this are treated as ties; ties go to larger `s`.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GapOptions {
    pub mode: SolverMode,
    /// Ritz residual bound for the iterative solver.
    pub tol: f64,
    /// Grid points of the coarse scan, endpoints included.
    pub n_scan: usize,
    /// Simplex width at which refinement may stop.
    pub xtol: f64,
    /// Objective spread at which refinement may stop.
    pub ftol: f64,
    pub max_refine_iter: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self {
            mode: SolverMode::Auto,
            tol: 1e-10,
            n_scan: 21,
            xtol: 1e-4,
            ftol: 1e-10,
            max_refine_iter: 200,
        }
    }
}

impl GapOptions {
    pub fn validate(&self) -> Result<()> {
        if self.n_scan < 2 {
            return Err(invalid("n_scan must be at least 2 so both endpoints are probed"));
        }
        if !(self.tol > 0.0 && self.xtol > 0.0 && self.ftol > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub s: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub delta: f64,
    pub s_star: f64,
    /// Ground energy at `s_star`, with round-off below zero clamped.
    pub lambda0: f64,
    pub lambda1: f64,
    pub raw_lambda0: f64,
    pub evaluations: Vec<Probe>,
    pub refine_iterations: usize,
    pub refine_converged: bool,
    pub mode: SolverMode,
}

/// Evaluates `delta(s) = lambda1(s) - lambda0(s)` for one target graph,
/// caching the dense Hamiltonians when the dense solver is in use.
#[derive(Debug, Clone)]
pub struct GapEvaluator {
    target: GoogleMatrix,
    reference: GoogleMatrix,
    mode: SolverMode,
    tol: f64,
    dense: Option<(DMatrix<f64>, DMatrix<f64>)>,
}

impl GapEvaluator {
    pub fn new(target: GoogleMatrix, mode: SolverMode, tol: f64) -> Result<Self> {
        let n = target.n();
        if n < 2 {
            return Err(Error::DegenerateDimension(
                "gap needs at least two vertices".into(),
            ));
        }
        let reference = complete_reference(n, target.alpha_g())?;
        let mode = mode.resolve(n);
        let dense = match mode {
            SolverMode::Dense => Some((dense_h(&target)?, dense_h(&reference)?)),
            _ => None,
        };
        Ok(Self {
            target,
            reference,
            mode,
            tol,
            dense,
        })
    }

    pub fn mode(&self) -> SolverMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    /// Raw `(lambda0, lambda1)` of `H(s)`.
    pub fn eigen_pair(&self, s: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&s) {
            return Err(invalid(format!("s must lie in [0, 1], got {s}")));
        }
        match &self.dense {
            Some((h_target, h_reference)) => {
                let h = if s == 1.0 {
                    h_target.clone()
                } else {
                    h_target * s + h_reference * (1.0 - s)
                };
                dense_two_lowest(h)
            }
            None => {
                let op = interpolated(&self.target, &self.reference, s)?;
                let out = smallest_pair(self.n(), |v, o| op.apply_into(v, o), self.tol, self.n())?;
                Ok((out.lambda0, out.lambda1))
            }
        }
    }

    pub fn gap(&self, s: f64) -> Result<f64> {
        let (a, b) = self.eigen_pair(s)?;
        Ok((b - a).max(0.0))
    }
}

/// `delta(s)` of `s h(G) + (1 - s) h(G_c)`.
pub fn gap(g: &GoogleMatrix, gc: &GoogleMatrix, s: f64, mode: SolverMode, tol: f64) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::DegenerateDimension(
            "gap needs at least two vertices".into(),
        ));
    }
    let op = interpolated(g, gc, s)?;
    let (a, b) = super::two_lowest(&op, mode, tol)?;
    Ok((b - a).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// One-dimensional Nelder-Mead on `[lo, hi]` from the simplex `{x0, x1}`.
///
/// Trial points are clamped to the interval. Stops when the simplex width is
/// below `xtol` and the objective spread is below `ftol`.
#[allow(clippy::too_many_arguments)]
pub fn nelder_mead_1d<F>(
    mut f: F,
    x0: f64,
    x1: f64,
    lo: f64,
    hi: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<NelderMeadOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let clamp = |x: f64| x.clamp(lo, hi);
    let (mut b, mut w) = (clamp(x0), clamp(x1));
    let (mut fb, mut fw) = (f(b)?, f(w)?);
    let mut iterations = 0;
    loop {
        if fw < fb || (fw == fb && w > b) {
            std::mem::swap(&mut b, &mut w);
            std::mem::swap(&mut fb, &mut fw);
        }
        if (b - w).abs() < xtol && (fw - fb).abs() < ftol {
            return Ok(NelderMeadOutcome {
                x: b,
                fx: fb,
                iterations,
                converged: true,
            });
        }
        if iterations >= max_iter {
            return Ok(NelderMeadOutcome {
                x: b,
                fx: fb,
                iterations,
                converged: false,
            });
        }
        iterations += 1;

        let xr = clamp(b + (b - w));
        let fr = f(xr)?;
        if fr < fb {
            let xe = clamp(b + 2.0 * (b - w));
            let fe = f(xe)?;
            if fe < fr {
                (w, fw) = (xe, fe);
            } else {
                (w, fw) = (xr, fr);
            }
        } else if fr < fw {
            (w, fw) = (xr, fr);
        } else {
            let xc = clamp(b + 0.5 * (w - b));
            let fc = f(xc)?;
            if fc < fw {
                (w, fw) = (xc, fc);
            } else {
                // shrink towards the best vertex
                w = clamp(b + 0.25 * (w - b));
                fw = f(w)?;
            }
        }
    }
}

/// Minimum of `delta(s)` over `[0, 1]` for the Google matrix `g`.
pub fn min_gap(g: &GoogleMatrix, opts: &GapOptions) -> Result<GapResult> {
    opts.validate()?;
    let eval = GapEvaluator::new(g.clone(), opts.mode, opts.tol)?;
    min_gap_with(&eval, opts)
}

/// As [`min_gap`], reusing a prepared evaluator.
pub fn min_gap_with(eval: &GapEvaluator, opts: &GapOptions) -> Result<GapResult> {
    opts.validate()?;
    let mut trace: Vec<Probe> = Vec::new();
    let mut cache: HashMap<u64, (f64, f64)> = HashMap::new();
    let mut probe = |s: f64| -> Result<f64> {
        let key = s.to_bits();
        let (a, b) = match cache.get(&key) {
            Some(&pair) => pair,
            None => {
                let pair = eval.eigen_pair(s)?;
                cache.insert(key, pair);
                trace.push(Probe {
                    s,
                    delta: (pair.1 - pair.0).max(0.0),
                });
                pair
            }
        };
        Ok((b - a).max(0.0))
    };

    let steps = opts.n_scan - 1;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..=steps {
        let s = i as f64 / steps as f64;
        let d = probe(s)?;
        if d <= best.1 + TIE_TOLERANCE {
            best = (s, d.min(best.1));
        }
    }
    let h = 1.0 / steps as f64;
    let partner = if best.0 + h <= 1.0 { best.0 + h } else { best.0 - h };
    let nm = nelder_mead_1d(
        &mut probe,
        best.0,
        partner,
        0.0,
        1.0,
        opts.xtol,
        opts.ftol,
        opts.max_refine_iter,
    )?;

    let delta = trace.iter().map(|p| p.delta).fold(f64::INFINITY, f64::min);
    let s_star = trace
        .iter()
        .filter(|p| p.delta <= delta + TIE_TOLERANCE)
        .map(|p| p.s)
        .fold(f64::NEG_INFINITY, f64::max);
    let (raw0, raw1) = cache[&s_star.to_bits()];
    Ok(GapResult {
        delta,
        s_star,
        lambda0: psd_floor(raw0),
        lambda1: raw1,
        raw_lambda0: raw0,
        evaluations: trace,
        refine_iterations: nm.iterations,
        refine_converged: nm.converged,
        mode: eval.mode(),
    })
}
