use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::netgen::SimpleDigraph;
use crate::pagerank::{google_matrix, GoogleMatrix};

/// Google matrix of the complete graph with loops on `n` vertices.
///
/// Its transition matrix is uniform in every row, which is exactly the
/// all-dangling case, so it is built from the edgeless graph. The result
/// equals `ones / n` for every damping value.
pub fn complete_reference(n: usize, alpha_g: f64) -> Result<GoogleMatrix> {
    if n < 1 {
        return Err(invalid("reference graph needs at least one vertex"));
    }
    google_matrix(&SimpleDigraph::empty(n), alpha_g)
}

/// `s h(G) + (1 - s) h(G_c)` with `h(X) = (I - X)^T (I - X)`, applied without
/// materialising any matrix.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianOperator<'a> {
    target: &'a GoogleMatrix,
    reference: Option<&'a GoogleMatrix>,
    s: f64,
}

/// `h(G)` alone, i.e. the interpolation at `s = 1`.
pub fn h_of(gm: &GoogleMatrix) -> HamiltonianOperator<'_> {
    HamiltonianOperator {
        target: gm,
        reference: None,
        s: 1.0,
    }
}

/// Interpolation Hamiltonian between the reference `gc` (at `s = 0`) and the
/// target `g` (at `s = 1`).
pub fn interpolated<'a>(
    g: &'a GoogleMatrix,
    gc: &'a GoogleMatrix,
    s: f64,
) -> Result<HamiltonianOperator<'a>> {
    if !(0.0..=1.0).contains(&s) {
        return Err(invalid(format!("s must lie in [0, 1], got {s}")));
    }
    if g.n() != gc.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: gc.n(),
        });
    }
    Ok(HamiltonianOperator {
        target: g,
        reference: Some(gc),
        s,
    })
}

/// `out = (I - G)^T (I - G) v`, using `scratch` as workspace.
fn apply_h(gm: &GoogleMatrix, v: &[f64], scratch: &mut [f64], out: &mut [f64]) {
    gm.apply_into(v, scratch);
    for (w, x) in scratch.iter_mut().zip(v) {
        *w = x - *w;
    }
    gm.apply_transpose_into(scratch, out);
    for (o, w) in out.iter_mut().zip(scratch.iter()) {
        *o = w - *o;
    }
}

/// Dense `(I - G)^T (I - G)`.
pub(crate) fn dense_h(gm: &GoogleMatrix) -> Result<DMatrix<f64>> {
    let n = gm.n();
    let m = DMatrix::identity(n, n) - gm.to_dense()?;
    Ok(m.tr_mul(&m))
}

impl<'a> HamiltonianOperator<'a> {
    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn target(&self) -> &'a GoogleMatrix {
        self.target
    }

    /// `out = H v`. Slices must have length `n`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n();
        let mut scratch = vec![0.0; n];
        apply_h(self.target, v, &mut scratch, out);
        if let Some(gc) = self.reference {
            if self.s < 1.0 {
                let mut other = vec![0.0; n];
                apply_h(gc, v, &mut scratch, &mut other);
                for (o, r) in out.iter_mut().zip(&other) {
                    *o = self.s * *o + (1.0 - self.s) * r;
                }
            }
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: v.len(),
            });
        }
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let h = dense_h(self.target)?;
        match self.reference {
            Some(gc) if self.s < 1.0 => Ok(h * self.s + dense_h(gc)? * (1.0 - self.s)),
            _ => Ok(h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_graph() -> GoogleMatrix {
        let g = SimpleDigraph::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 2)]).unwrap();
        google_matrix(&g, 0.85).unwrap()
    }

    #[test]
    fn reference_is_uniform() {
        for alpha in [0.1, 0.85, 0.99] {
            let d = complete_reference(2, alpha).unwrap().to_dense().unwrap();
            for x in d.iter() {
                assert!((x - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn reference_hamiltonian_is_projector() {
        let n = 6;
        let gc = complete_reference(n, 0.85).unwrap();
        let h = h_of(&gc).to_dense().unwrap();
        let expected = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        assert!((h - expected).amax() < 1e-14);
    }

    #[test]
    fn single_node_is_zero_operator() {
        let gc = complete_reference(1, 0.85).unwrap();
        let h = h_of(&gc).to_dense().unwrap();
        assert!(h[(0, 0)].abs() < 1e-15);
    }

    #[test]
    fn endpoints_match_components() {
        let g = sample_graph();
        let gc = complete_reference(5, 0.85).unwrap();
        let at0 = interpolated(&g, &gc, 0.0).unwrap().to_dense().unwrap();
        let at1 = interpolated(&g, &gc, 1.0).unwrap().to_dense().unwrap();
        assert_eq!(at0, h_of(&gc).to_dense().unwrap());
        assert_eq!(at1, h_of(&g).to_dense().unwrap());
    }

    #[test]
    fn structured_apply_matches_dense() {
        let g = sample_graph();
        let gc = complete_reference(5, 0.85).unwrap();
        let v = [0.3, -1.0, 2.5, 0.0, 0.7];
        for s in [0.0, 0.25, 0.9, 1.0] {
            let op = interpolated(&g, &gc, s).unwrap();
            let dense = op.to_dense().unwrap() * nalgebra::DVector::from_column_slice(&v);
            let fast = op.apply(&v).unwrap();
            for (a, b) in dense.iter().zip(&fast) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn symmetric_when_materialised() {
        let g = sample_graph();
        let gc = complete_reference(5, 0.85).unwrap();
        let h = interpolated(&g, &gc, 0.6).unwrap().to_dense().unwrap();
        assert!((&h - h.transpose()).amax() < 1e-12);
    }

    #[test]
    fn rejects_bad_s_and_sizes() {
        let g = sample_graph();
        let gc = complete_reference(5, 0.85).unwrap();
        assert!(interpolated(&g, &gc, -0.1).is_err());
        assert!(interpolated(&g, &gc, 1.5).is_err());
        let other = complete_reference(4, 0.85).unwrap();
        assert!(interpolated(&g, &other, 0.5).is_err());
    }
}
