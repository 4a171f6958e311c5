//! Interpolating Hamiltonian `H(s)`, its two lowest eigenvalues and the
//! minimum gap over `s`.

mod hamiltonian;
mod lanczos;
mod minimize;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use hamiltonian::{complete_reference, h_of, interpolated, HamiltonianOperator};
pub use lanczos::{smallest_pair, LanczosOutcome};
pub use minimize::{
    gap, min_gap, min_gap_with, nelder_mead_1d, GapEvaluator, GapOptions, GapResult, NelderMeadOutcome, Probe,
};

use crate::error::{Error, Result};

/// Sizes up to this use the dense solver when the mode is `Auto`.
pub const AUTO_DENSE_MAX: usize = 1024;

/// Eigenvalues in `[-PSD_FLOOR, 0)` are reported as zero.
pub const PSD_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    /// Full symmetric eigendecomposition of the materialised operator.
    Dense,
    /// Lanczos on structured products.
    Iterative,
    /// Dense up to [`AUTO_DENSE_MAX`], iterative above.
    #[default]
    Auto,
}

impl SolverMode {
    pub fn resolve(self, n: usize) -> SolverMode {
        match self {
            SolverMode::Auto if n <= AUTO_DENSE_MAX => SolverMode::Dense,
            SolverMode::Auto => SolverMode::Iterative,
            other => other,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverMode::Dense => "dense",
            SolverMode::Iterative => "iterative",
            SolverMode::Auto => "auto",
        }
    }
}

impl std::str::FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(SolverMode::Dense),
            "iterative" => Ok(SolverMode::Iterative),
            "auto" => Ok(SolverMode::Auto),
            other => Err(Error::InvalidParameter(format!("unknown solver mode `{other}`"))),
        }
    }
}

/// Two smallest eigenvalues of a dense symmetric matrix.
pub(crate) fn dense_two_lowest(m: DMatrix<f64>) -> Result<(f64, f64)> {
    if m.nrows() < 2 {
        return Err(Error::DegenerateDimension(
            "need at least two dimensions for an excited state".into(),
        ));
    }
    let ev = m.symmetric_eigenvalues();
    let (mut a, mut b) = (f64::INFINITY, f64::INFINITY);
    for &x in ev.iter() {
        if x < a {
            b = a;
            a = x;
        } else if x < b {
            b = x;
        }
    }
    Ok((a, b))
}

/// Raw (unclamped) two smallest eigenvalues of `op`.
///
/// `tol` bounds the Ritz residuals in iterative mode and is unused by the
/// dense solver.
pub fn two_lowest(op: &HamiltonianOperator<'_>, mode: SolverMode, tol: f64) -> Result<(f64, f64)> {
    let n = op.n();
    if n < 2 {
        return Err(Error::DegenerateDimension(
            "need at least two dimensions for an excited state".into(),
        ));
    }
    match mode.resolve(n) {
        SolverMode::Dense => dense_two_lowest(op.to_dense()?),
        _ => {
            let out = smallest_pair(n, |v, o| op.apply_into(v, o), tol, n)?;
            Ok((out.lambda0, out.lambda1))
        }
    }
}

/// Lowest eigenvalue and unit eigenvector of `op`, from a dense solve.
/// The vector's sign is fixed so that its entries sum to a non-negative value.
pub fn ground_state(op: &HamiltonianOperator<'_>) -> Result<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(op.to_dense()?);
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::EmptyInput("zero-dimensional operator".into()))?;
    let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok((val, v))
}

/// Clamps tiny negative round-off below zero.
pub fn psd_floor(x: f64) -> f64 {
    if (-PSD_FLOOR..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::SimpleDigraph;
    use crate::pagerank::{google_matrix, pagerank_power};

    #[test]
    fn reference_two_lowest_is_zero_one() {
        for n in [2, 3, 17] {
            let gc = complete_reference(n, 0.85).unwrap();
            for mode in [SolverMode::Dense, SolverMode::Iterative] {
                let (a, b) = two_lowest(&h_of(&gc), mode, 1e-12).unwrap();
                assert!(a.abs() < 1e-12, "{mode:?} {a}");
                assert!((b - 1.0).abs() < 1e-12, "{mode:?} {b}");
            }
        }
    }

    #[test]
    fn single_vertex_is_degenerate() {
        let gc = complete_reference(1, 0.85).unwrap();
        for mode in [SolverMode::Dense, SolverMode::Iterative] {
            assert!(matches!(
                two_lowest(&h_of(&gc), mode, 1e-10),
                Err(Error::DegenerateDimension(_))
            ));
        }
    }

    #[test]
    fn reference_ground_state_is_uniform() {
        let n = 9;
        let gc = complete_reference(n, 0.85).unwrap();
        let (val, v) = ground_state(&h_of(&gc)).unwrap();
        assert!(val.abs() < 1e-12);
        let overlap: f64 = v.iter().sum::<f64>() / (n as f64).sqrt();
        assert!(overlap > 1.0 - 1e-12);
    }

    #[test]
    fn two_node_ground_state_is_pagerank() {
        // independent 2x2 route: PageRank (1, 1.85)/2.85 normalised in 2-norm
        let g = SimpleDigraph::from_edges(2, [(0, 1)]).unwrap();
        let gm = google_matrix(&g, 0.85).unwrap();
        let (val, v) = ground_state(&h_of(&gm)).unwrap();
        let norm = (1.0f64 + 1.85 * 1.85).sqrt();
        assert!(val.abs() < 1e-14);
        assert!((v[0] - 1.0 / norm).abs() < 1e-12);
        assert!((v[1] - 1.85 / norm).abs() < 1e-12);
        let p = pagerank_power(&gm, 1e-14, 10_000).unwrap().l2_normalized();
        assert!((p[0] - v[0]).abs() < 1e-12);
    }

    #[test]
    fn mode_resolution() {
        assert_eq!(SolverMode::Auto.resolve(1024), SolverMode::Dense);
        assert_eq!(SolverMode::Auto.resolve(1025), SolverMode::Iterative);
        assert_eq!(SolverMode::Dense.resolve(5000), SolverMode::Dense);
        assert_eq!("iterative".parse::<SolverMode>().unwrap(), SolverMode::Iterative);
        assert!("lapack".parse::<SolverMode>().is_err());
    }

    #[test]
    fn floor_only_touches_round_off() {
        assert_eq!(psd_floor(-1e-12), 0.0);
        assert_eq!(psd_floor(-1e-6), -1e-6);
        assert_eq!(psd_floor(0.3), 0.3);
    }
}
