//! Lanczos iteration with full reorthogonalisation for the two smallest
//! eigenvalues of a symmetric operator known only through products.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOutcome {
    pub lambda0: f64,
    pub lambda1: f64,
    /// Largest residual norm of the two Ritz pairs.
    pub residual: f64,
    pub steps: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Subtracts the projection of `w` onto every basis vector, twice.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            for (x, y) in w.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// Fresh unit vector orthogonal to `basis`, or `None` if the basis already
/// spans the space.
fn fresh_direction(n: usize, basis: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        reorthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Ritz values (ascending) with residual estimates `|beta * y_last|`.
fn ritz(alphas: &[f64], betas: &[f64], beta_last: f64) -> Vec<(f64, f64)> {
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let y_last = eig.eigenvectors[(k - 1, i)];
            (eig.eigenvalues[i], (beta_last * y_last).abs())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Two smallest eigenvalues of the symmetric `n x n` operator `apply`.
///
/// The start vector is a fixed pseudo-random vector, so results are
/// deterministic. Iteration stops once both Ritz residuals are `<= tol`, or
/// fails with [`Error::ConvergenceFailure`] after `max_steps` steps.
pub fn smallest_pair<F>(n: usize, mut apply: F, tol: f64, max_steps: usize) -> Result<LanczosOutcome>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if n < 2 {
        return Err(Error::DegenerateDimension(
            "need at least two dimensions for an excited state".into(),
        ));
    }
    let max_steps = max_steps.clamp(2, n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a2c_0500 ^ n as u64);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps.min(n));
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut q = fresh_direction(n, &basis, &mut rng).expect("empty basis");
    let mut w = vec![0.0; n];
    let mut last_residual = f64::INFINITY;
    let mut next_check = 8usize;

    loop {
        apply(&q, &mut w);
        let alpha = dot(&q, &w);
        // full reorthogonalisation below also removes the previous direction
        for (x, y) in w.iter_mut().zip(&q) {
            *x -= alpha * y;
        }
        basis.push(std::mem::take(&mut q));
        reorthogonalize(&mut w, &basis);
        alphas.push(alpha);
        let mut beta = norm(&w);
        let steps = alphas.len();
        let scale = alphas.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        let breakdown = beta <= 1e-13 * scale;
        if breakdown {
            beta = 0.0;
        }

        let exhausted = steps >= n || steps >= max_steps;
        if steps >= 2 && (breakdown || exhausted || steps >= next_check) {
            let pairs = ritz(&alphas, &betas, beta);
            let residual = pairs[0].1.max(pairs[1].1);
            last_residual = residual;
            if residual <= tol || (exhausted && steps >= n) {
                return Ok(LanczosOutcome {
                    lambda0: pairs[0].0,
                    lambda1: pairs[1].0,
                    residual,
                    steps,
                });
            }
            next_check = steps + (steps / 8).max(4);
        }
        if exhausted {
            return Err(Error::ConvergenceFailure {
                iterations: steps,
                residual: last_residual,
            });
        }

        if breakdown {
            // invariant subspace: continue in a fresh orthogonal direction
            match fresh_direction(n, &basis, &mut rng) {
                Some(v) => q = v,
                None => {
                    let pairs = ritz(&alphas, &betas, 0.0);
                    return Ok(LanczosOutcome {
                        lambda0: pairs[0].0,
                        lambda1: pairs[1].0,
                        residual: 0.0,
                        steps,
                    });
                }
            }
        } else {
            q = w.iter().map(|x| x / beta).collect();
        }
        betas.push(beta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_apply(m: &DMatrix<f64>) -> impl FnMut(&[f64], &mut [f64]) + '_ {
        move |v, out| {
            for r in 0..m.nrows() {
                out[r] = (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum();
            }
        }
    }

    #[test]
    fn diagonal_operator() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            (0..40).map(|i| 0.5 + i as f64 * 0.1).collect(),
        ));
        let out = smallest_pair(40, dense_apply(&d), 1e-11, 40).unwrap();
        assert!((out.lambda0 - 0.5).abs() < 1e-10);
        assert!((out.lambda1 - 0.6).abs() < 1e-10);
    }

    #[test]
    fn projector_with_breakdown() {
        // I - J/n has spectrum {0, 1 x (n-1)}; the Krylov space closes after two steps
        let n = 30;
        let p = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        let out = smallest_pair(n, dense_apply(&p), 1e-12, n).unwrap();
        assert!(out.lambda0.abs() < 1e-12);
        assert!((out.lambda1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_psd_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let h = a.tr_mul(&a);
        let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let out = smallest_pair(n, dense_apply(&h), 1e-11, n).unwrap();
        assert!((out.lambda0 - ev[0]).abs() < 1e-9);
        assert!((out.lambda1 - ev[1]).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 80;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let h = a.tr_mul(&a);
        assert!(matches!(
            smallest_pair(n, dense_apply(&h), 1e-14, 5),
            Err(Error::ConvergenceFailure { .. })
        ));
    }

    #[test]
    fn one_dimension_is_degenerate() {
        let m = DMatrix::from_element(1, 1, 2.0);
        assert!(matches!(
            smallest_pair(1, dense_apply(&m), 1e-10, 1),
            Err(Error::DegenerateDimension(_))
        ));
    }
}
