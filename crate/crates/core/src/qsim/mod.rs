//! Desk-scale simulation of homology by amplitude amplification and phase
//! estimation: Grover projection onto non-degenerate simplices, quantum
//! counting of the degeneracy ratio, the Dirac operator of the normalized
//! complex and phase-estimation sampling of Betti numbers.

mod dirac;
mod grover;
mod qpe;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sset::TruncatedSimplicialSet;

pub use dirac::{dirac_operator, evolve, register_laplacian};
pub use grover::{grover_project, quantum_count, CountingResult, GroverResult};
pub use qpe::{qpe_betti, MixedStateMethod, QpeConfig, QpeOutcome, QpeReport, PURE_AVERAGE_LIMIT};

/// Normalization and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-12;

/// A pure state over the simplex basis of one degree, or over the whole
/// normalized register when `degree` is `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    pub degree: Option<usize>,
    pub amplitudes: DVector<Complex64>,
}

impl QuantumState {
    pub fn new(degree: Option<usize>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::invalid(format!("state has norm {norm}")));
        }
        Ok(QuantumState { degree, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `|⟨self|other⟩|`, which is 1 exactly when the states agree up to a
    /// global phase.
    pub fn overlap(&self, other: &QuantumState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks trace, Hermiticity and the smallest eigenvalue against [`STATE_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix { matrix };
        let trace = rho.trace();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::invariant(format!("density matrix has trace {trace}")));
        }
        let herm = rho.hermiticity_residual();
        if herm > STATE_TOL {
            return Err(Error::invariant(format!("density matrix is not Hermitian: residual {herm:e}")));
        }
        let min = rho.min_eigenvalue();
        if min < -STATE_TOL {
            return Err(Error::invariant(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// The uniform mixture of the given basis states.
    pub fn uniform_mixture(dim: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::NoTarget("uniform mixture over an empty set".into()));
        }
        let w = Complex64::new(1.0 / support.len() as f64, 0.0);
        let mut m = DMatrix::zeros(dim, dim);
        for &k in support {
            m[(k, k)] = w;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `|X_n|^{-1/2} Σ |σ⟩` over all `n`-simplices.
pub fn uniform_state(x: &TruncatedSimplicialSet, n: usize) -> Result<QuantumState> {
    if n > x.cutoff() {
        return Err(Error::out_of_range("uniform state", n, x.cutoff()));
    }
    let count = x.count(n);
    let a = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
    QuantumState::new(Some(n), DVector::from_element(count, a))
}

pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}
