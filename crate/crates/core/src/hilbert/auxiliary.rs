use serde::Serialize;

use super::{degeneracy_matrix, face_matrix, LinearOperator};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::sset::{SimplexRef, TruncatedSimplicialSet};

/// The operators built from products of a face or degeneracy operator with
/// an adjoint, all acting on a single degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuxiliaryKind {
    /// `D_{n+1,i} D_{n+1,i}ᵀ`: diagonal, counts the `d_{n+1,i}`-fiber over each simplex.
    Omega { n: usize, i: usize },
    /// `D_{n,i}ᵀ D_{n,i}`; zero in degree 0.
    Theta { n: usize, i: usize },
    /// `D_{n+1,i+1} D_{n+1,i}ᵀ`.
    Gamma { n: usize, i: usize },
    /// `S_{n-1,i} S_{n-1,i}ᵀ`, the projector onto the image of `s_{n-1,i}`.
    PiI { n: usize, i: usize },
    /// Projector onto the span of degenerate simplices; zero in degree 0.
    Pi { n: usize },
}

pub fn auxiliary_operator(x: &TruncatedSimplicialSet, kind: AuxiliaryKind) -> Result<LinearOperator> {
    let (n, m) = match kind {
        AuxiliaryKind::Omega { n, i } => {
            check_index(i, n + 1)?;
            let d = face_matrix(x, n + 1, i)?;
            (n, d.mul(&d.transpose()))
        }
        AuxiliaryKind::Theta { n, i } => {
            check_index(i, n)?;
            if n == 0 {
                (0, IntMatrix::zeros(x.count(0), x.count(0)))
            } else {
                let d = face_matrix(x, n, i)?;
                (n, d.transpose().mul(&d))
            }
        }
        AuxiliaryKind::Gamma { n, i } => {
            check_index(i, n)?;
            (n, face_matrix(x, n + 1, i + 1)?.mul(&face_matrix(x, n + 1, i)?.transpose()))
        }
        AuxiliaryKind::PiI { n, i } => {
            if n == 0 || i + 1 > n {
                return Err(Error::invalid(format!("Pi_{n},{i} needs 0 <= i < n")));
            }
            (n, partial_projector(x, n, i)?)
        }
        AuxiliaryKind::Pi { n } => (n, degeneracy_projector(x, n)?),
    };
    Ok(LinearOperator::between(n, n, m))
}

fn check_index(i: usize, max: usize) -> Result<()> {
    if i > max {
        return Err(Error::invalid(format!("index {i} exceeds {max}")));
    }
    Ok(())
}

fn partial_projector(x: &TruncatedSimplicialSet, n: usize, i: usize) -> Result<IntMatrix> {
    let s = degeneracy_matrix(x, n - 1, i)?;
    Ok(s.mul(&s.transpose()))
}

/// `Π_n = 1 − ∏_i (1 − Π_{n,i})`, checked against the degeneracy predicate.
pub fn degeneracy_projector(x: &TruncatedSimplicialSet, n: usize) -> Result<IntMatrix> {
    if n > x.cutoff() {
        return Err(Error::out_of_range("degeneracy projector", n, x.cutoff()));
    }
    let size = x.count(n);
    let one = IntMatrix::identity(size);
    let mut complement = one.clone();
    for i in 0..n {
        complement = complement.mul(&one.sub(&partial_projector(x, n, i)?));
    }
    let pi = one.sub(&complement);
    let predicate: Vec<i64> = (0..size)
        .map(|k| x.is_degenerate(SimplexRef::new(n, k)) as i64)
        .collect();
    if pi != IntMatrix::diagonal(&predicate) {
        return Err(Error::invariant(format!(
            "degeneracy projector in degree {n} disagrees with the degeneracy predicate"
        )));
    }
    Ok(pi)
}
