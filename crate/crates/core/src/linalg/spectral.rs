//! Floating-point spectral tools for symmetric matrices.

use nalgebra::{DMatrix, SymmetricEigen};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Relative tolerance: eigenvalues below `ZERO_TOL_FACTOR · max(‖H‖∞, 1)` count as zero.
pub const ZERO_TOL_FACTOR: f64 = 1e-9;
/// Width of the forbidden band above the zero tolerance.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SymSpectrum {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
    pub tol: f64,
}

impl SymSpectrum {
    /// Decomposes `m` and classifies eigenvalues against the zero tolerance.
    ///
    /// Fails when an eigenvalue falls in `[tol, 10·tol]`.
    pub fn of(m: &DMatrix<f64>) -> Result<Self> {
        let spec = Self::unchecked(m);
        for &v in &spec.values {
            if v.abs() >= spec.tol && v.abs() <= AMBIGUITY_FACTOR * spec.tol {
                return Err(Error::AmbiguousSpectrum {
                    eigenvalue: v,
                    tol: spec.tol,
                    upper: AMBIGUITY_FACTOR * spec.tol,
                });
            }
        }
        Ok(spec)
    }

    pub fn of_int(m: &IntMatrix) -> Result<Self> {
        Self::of(&m.to_f64())
    }

    /// Decomposition without the ambiguity-band check.
    pub fn unchecked(m: &DMatrix<f64>) -> Self {
        assert!(m.is_square(), "spectrum of a non-square matrix");
        let n = m.nrows();
        let norm = (0..n)
            .map(|r| m.row(r).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tol = ZERO_TOL_FACTOR * norm.max(1.0);
        if n == 0 {
            return SymSpectrum {
                values: Vec::new(),
                vectors: DMatrix::zeros(0, 0),
                tol,
            };
        }
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        SymSpectrum {
            values,
            vectors,
            tol,
        }
    }

    pub fn is_zero_eigenvalue(&self, v: f64) -> bool {
        v.abs() < self.tol
    }

    pub fn kernel_dim(&self) -> usize {
        self.values.iter().filter(|&&v| self.is_zero_eigenvalue(v)).count()
    }

    /// Orthonormal basis of the numerical kernel, as columns.
    pub fn kernel_basis(&self) -> DMatrix<f64> {
        let cols: Vec<usize> = (0..self.values.len())
            .filter(|&k| self.is_zero_eigenvalue(self.values[k]))
            .collect();
        DMatrix::from_fn(self.vectors.nrows(), cols.len(), |r, c| self.vectors[(r, cols[c])])
    }

    pub fn kernel_projector(&self) -> DMatrix<f64> {
        let k = self.kernel_basis();
        &k * k.transpose()
    }

    /// Moore–Penrose inverse: inverts the nonzero part of the spectrum.
    pub fn pseudo_inverse(&self) -> DMatrix<f64> {
        let n = self.values.len();
        let mut out = DMatrix::zeros(n, n);
        for (k, &v) in self.values.iter().enumerate() {
            if self.is_zero_eigenvalue(v) {
                continue;
            }
            let col = self.vectors.column(k);
            out += (col * col.transpose()) / v;
        }
        out
    }
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_and_inverse_resolve_identity() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        let s = SymSpectrum::of(&m).unwrap();
        assert_eq!(s.kernel_dim(), 0);
        let inv = s.pseudo_inverse();
        assert!(max_abs_diff(&(&m * &inv), &DMatrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = IntMatrix::from_dense(&[vec![3, 3], vec![3, 3]]);
        let s = SymSpectrum::of_int(&m).unwrap();
        assert_eq!(s.kernel_dim(), 1);
        assert!((s.values[1] - 6.0).abs() < 1e-12);
        let p = s.kernel_projector();
        assert!((p[(0, 0)] - 0.5).abs() < 1e-12 && (p[(0, 1)] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn ambiguous_eigenvalue_is_an_error() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3e-9]);
        assert!(matches!(SymSpectrum::of(&m), Err(Error::AmbiguousSpectrum { .. })));
    }
}
