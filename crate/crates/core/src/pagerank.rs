//! Transition matrix, Google matrix and classical PageRank.
//!
//! The uniform teleportation term is taken as `(1 - alpha_g) / n` times the
//! all-ones matrix so that `G` is column stochastic. Dangling rows of `P` are
//! uniform `1/n`. Neither term is ever stored: products cost `O(edges + n)`.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::netgen::SimpleDigraph;

/// Largest `n` that [`dense_google`] will materialise.
pub const DENSE_LIMIT: usize = 4096;

pub const DEFAULT_DAMPING: f64 = 0.85;

/// Row-stochastic random-walk matrix of a simple digraph.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    inv_out: Vec<f64>,
    dangling: Vec<usize>,
}

impl TransitionMatrix {
    pub fn from_graph(g: &SimpleDigraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(g.edge_count());
        let mut inv_out = Vec::with_capacity(n);
        let mut dangling = Vec::new();
        offsets.push(0);
        for i in 0..n {
            let nb = g.out_neighbors(i);
            targets.extend_from_slice(nb);
            offsets.push(targets.len());
            if nb.is_empty() {
                dangling.push(i);
                inv_out.push(0.0);
            } else {
                inv_out.push(1.0 / nb.len() as f64);
            }
        }
        Self {
            n,
            offsets,
            targets,
            inv_out,
            dangling,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertices with no out-edges.
    pub fn dangling(&self) -> &[usize] {
        &self.dangling
    }

    /// Explicit entries `(j, P(i, j))` of a non-dangling row; empty for
    /// dangling rows, which are implicitly uniform.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let w = self.inv_out[i];
        self.targets[self.offsets[i]..self.offsets[i + 1]]
            .iter()
            .map(move |&j| (j, w))
    }

    pub fn is_dangling(&self, i: usize) -> bool {
        self.offsets[i] == self.offsets[i + 1]
    }

    /// `out = P^T v`.
    pub fn apply_transpose_into(&self, v: &[f64], out: &mut [f64]) {
        let mut dangling_mass = 0.0;
        for &i in &self.dangling {
            dangling_mass += v[i];
        }
        out.fill(dangling_mass / self.n as f64);
        for i in 0..self.n {
            let w = v[i] * self.inv_out[i];
            for &j in &self.targets[self.offsets[i]..self.offsets[i + 1]] {
                out[j] += w;
            }
        }
    }

    /// `out = P v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let uniform = v.iter().sum::<f64>() / self.n as f64;
        for i in 0..self.n {
            let row = &self.targets[self.offsets[i]..self.offsets[i + 1]];
            out[i] = if row.is_empty() {
                uniform
            } else {
                row.iter().map(|&j| v[j]).sum::<f64>() * self.inv_out[i]
            };
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut p = DMatrix::zeros(n, n);
        for i in 0..n {
            if self.is_dangling(i) {
                for j in 0..n {
                    p[(i, j)] = 1.0 / n as f64;
                }
            } else {
                for (j, w) in self.row(i) {
                    p[(i, j)] = w;
                }
            }
        }
        p
    }
}

/// Structured `G = alpha_g P^T + (1 - alpha_g)/n * ones`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleMatrix {
    base: TransitionMatrix,
    alpha_g: f64,
}

impl GoogleMatrix {
    pub fn new(base: TransitionMatrix, alpha_g: f64) -> Result<Self> {
        if !(alpha_g > 0.0 && alpha_g < 1.0) {
            return Err(invalid(format!("damping must lie in (0, 1), got {alpha_g}")));
        }
        Ok(Self { base, alpha_g })
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn alpha_g(&self) -> f64 {
        self.alpha_g
    }

    pub fn transition(&self) -> &TransitionMatrix {
        &self.base
    }

    /// Coefficient of the implicit all-ones term.
    pub fn uniform_coefficient(&self) -> f64 {
        (1.0 - self.alpha_g) / self.n() as f64
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: len,
            });
        }
        Ok(())
    }

    /// `out = G v`. Slices must have length `n`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        self.base.apply_transpose_into(v, out);
        let shift = self.uniform_coefficient() * v.iter().sum::<f64>();
        for o in out.iter_mut() {
            *o = self.alpha_g * *o + shift;
        }
    }

    /// `out = G^T v`. Slices must have length `n`.
    pub fn apply_transpose_into(&self, v: &[f64], out: &mut [f64]) {
        self.base.apply_into(v, out);
        let shift = self.uniform_coefficient() * v.iter().sum::<f64>();
        for o in out.iter_mut() {
            *o = self.alpha_g * *o + shift;
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let mut out = vec![0.0; v.len()];
        self.apply_transpose_into(v, &mut out);
        Ok(out)
    }

    /// Explicit `n x n` matrix. Refuses sizes above [`DENSE_LIMIT`].
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let n = self.n();
        if n > DENSE_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "refusing to materialise a {n} x {n} Google matrix (limit {DENSE_LIMIT})"
            )));
        }
        let p = self.base.to_dense();
        let c = self.uniform_coefficient();
        Ok(DMatrix::from_fn(n, n, |r, col| self.alpha_g * p[(col, r)] + c))
    }
}

/// Probability vector returned by power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Copy rescaled to unit Euclidean norm.
    pub fn l2_normalized(&self) -> Vec<f64> {
        let norm = self.0.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.0.iter().map(|x| x / norm).collect()
    }

    /// `index,value` rows under a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "value"])?;
        for (i, v) in self.0.iter().enumerate() {
            out.write_record([i.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn transition_matrix(g: &SimpleDigraph) -> TransitionMatrix {
    TransitionMatrix::from_graph(g)
}

pub fn google_matrix(g: &SimpleDigraph, alpha_g: f64) -> Result<GoogleMatrix> {
    GoogleMatrix::new(TransitionMatrix::from_graph(g), alpha_g)
}

pub fn apply_g(gm: &GoogleMatrix, v: &[f64]) -> Result<Vec<f64>> {
    gm.apply(v)
}

pub fn dense_google(gm: &GoogleMatrix) -> Result<DMatrix<f64>> {
    gm.to_dense()
}

/// Power iteration from the uniform vector until the 1-norm change between
/// successive iterates drops below `tol`.
pub fn pagerank_power(gm: &GoogleMatrix, tol: f64, max_iter: usize) -> Result<RankVector> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let n = gm.n();
    let mut v = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut change = f64::INFINITY;
    for _ in 0..max_iter {
        gm.apply_into(&v, &mut next);
        let total: f64 = next.iter().sum();
        for x in next.iter_mut() {
            *x /= total;
        }
        change = v.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut v, &mut next);
        if change < tol {
            return Ok(RankVector(v));
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iter,
        residual: change,
    })
}
