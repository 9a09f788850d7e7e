use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Grade, LinearOperator};
use crate::homology::{normalized_complex, ChainComplexView};
use crate::linalg::{spectral::SymSpectrum, IntMatrix};
use crate::sset::TruncatedSimplicialSet;

/// Largest asymmetry accepted by [`evolve`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// `Σ_{n<N} (Q_{n+1} + Q_{n+1}ᵀ)` on the direct sum of the normalized
/// chain spaces. Its square is checked against [`register_laplacian`].
pub fn dirac_operator(x: &TruncatedSimplicialSet) -> Result<LinearOperator> {
    let view = normalized_complex(x)?;
    let b = dirac_matrix(&view);
    if b.mul(&b) != register_laplacian(&view) {
        return Err(Error::invariant("the Dirac operator does not square to the register Laplacian"));
    }
    Ok(LinearOperator::new(Grade::Register, Grade::Register, b))
}

pub(crate) fn dirac_matrix(view: &ChainComplexView) -> IntMatrix {
    let total = view.total_dim();
    let mut b = IntMatrix::zeros(total, total);
    for n in 1..=view.cutoff() {
        let q = view.boundary(n).embed(total, total, view.offset(n - 1), view.offset(n));
        b = b.add(&q).add(&q.transpose());
    }
    b
}

/// The block-diagonal sum of the degree Laplacians, truncated at the top.
pub fn register_laplacian(view: &ChainComplexView) -> IntMatrix {
    let blocks: Vec<IntMatrix> = (0..=view.cutoff()).map(|n| view.laplacian(n)).collect();
    IntMatrix::block_diagonal(&blocks.iter().collect::<Vec<_>>())
}

/// `exp(iτB)` for a real symmetric `B`, by exact spectral decomposition.
pub fn evolve(b: &DMatrix<f64>, tau: f64) -> Result<DMatrix<Complex64>> {
    if !b.is_square() {
        return Err(Error::invalid("evolution needs a square operator"));
    }
    let asym = (b - b.transpose()).abs().max();
    if asym > SYMMETRY_TOL {
        return Err(Error::invalid(format!("operator is not symmetric: residual {asym:e}")));
    }
    let spec = SymSpectrum::unchecked(b);
    Ok(evolve_spectral(&spec, tau))
}

pub(crate) fn evolve_spectral(spec: &SymSpectrum, tau: f64) -> DMatrix<Complex64> {
    let v = super::to_complex(&spec.vectors);
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        spec.values.len(),
        spec.values.iter().map(|&l| Complex64::from_polar(1.0, tau * l)),
    ));
    &v * phases * v.adjoint()
}
