//! Face and degeneracy maps as exact integer operators on the free vector
//! spaces spanned by simplices, together with their adjoints, fibers,
//! exchange defects and derived projectors.

mod auxiliary;
mod defect;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Triplet};
use crate::sset::{SimplexRef, SimplicialMorphismTable, TruncatedSimplicialSet};

pub use auxiliary::{auxiliary_operator, degeneracy_projector, AuxiliaryKind};
pub use defect::{defect, perfectness_class, DefectKind, DefectReport, DefectWitness, PerfectnessClass, PerfectnessReport};

/// Which simplicial space an operator acts on: a single degree, or the
/// direct sum over all degrees of the non-degenerate register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Degree(usize),
    Register,
}

/// An integer matrix tagged with source and target grade. Rows index target
/// simplices, columns index source simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator {
    pub source: Grade,
    pub target: Grade,
    pub matrix: IntMatrix,
}

impl LinearOperator {
    pub fn new(source: Grade, target: Grade, matrix: IntMatrix) -> Self {
        LinearOperator { source, target, matrix }
    }

    pub fn between(source: usize, target: usize, matrix: IntMatrix) -> Self {
        Self::new(Grade::Degree(source), Grade::Degree(target), matrix)
    }

    /// The adjoint, which for real integer matrices is the transpose.
    pub fn adjoint(&self) -> Self {
        LinearOperator {
            source: self.target,
            target: self.source,
            matrix: self.matrix.transpose(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LinearOperator) -> Result<Self> {
        if other.source != self.target {
            return Err(Error::invalid(format!(
                "cannot compose: {:?} does not match {:?}",
                self.target, other.source
            )));
        }
        Ok(LinearOperator {
            source: self.source,
            target: other.target,
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    pub fn triplets(&self) -> Vec<Triplet> {
        self.matrix.triplets()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Face,
    Degeneracy,
}

/// `D_{n,i}` (degree `n → n-1`) or `S_{n,i}` (degree `n → n+1`).
pub fn simplicial_operator(x: &TruncatedSimplicialSet, kind: OperatorKind, n: usize, i: usize) -> Result<LinearOperator> {
    match kind {
        OperatorKind::Face => Ok(LinearOperator::between(n, n - 1, face_matrix(x, n, i)?)),
        OperatorKind::Degeneracy => Ok(LinearOperator::between(n, n + 1, degeneracy_matrix(x, n, i)?)),
    }
}

pub(crate) fn face_matrix(x: &TruncatedSimplicialSet, n: usize, i: usize) -> Result<IntMatrix> {
    if n == 0 || n > x.cutoff() {
        return Err(Error::out_of_range(format!("face operator D_{n},{i}"), n, x.cutoff()));
    }
    if i > n {
        return Err(Error::invalid(format!("face index {i} exceeds degree {n}")));
    }
    Ok(IntMatrix::from_function(x.face_map(n, i), x.count(n - 1)))
}

pub(crate) fn degeneracy_matrix(x: &TruncatedSimplicialSet, n: usize, i: usize) -> Result<IntMatrix> {
    if n + 1 > x.cutoff() {
        return Err(Error::out_of_range(format!("degeneracy operator S_{n},{i}"), n + 1, x.cutoff()));
    }
    if i > n {
        return Err(Error::invalid(format!("degeneracy index {i} exceeds degree {n}")));
    }
    Ok(IntMatrix::from_function(x.degeneracy_map(n, i), x.count(n + 1)))
}

/// Fiber of a map given as an index table: `out[t]` lists every `k` with `map[k] = t`.
pub(crate) fn fibers(map: &[usize], target_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); target_len];
    for (k, &t) in map.iter().enumerate() {
        out[t].push(k);
    }
    out
}

/// The simplices sent to `target` by `d_{n,i}` (target of degree `n-1`) or
/// by `s_{n,i}` (target of degree `n+1`), ascending.
pub fn preimage_set(
    x: &TruncatedSimplicialSet,
    kind: OperatorKind,
    n: usize,
    i: usize,
    target: SimplexRef,
) -> Result<Vec<SimplexRef>> {
    let (map, expected) = match kind {
        OperatorKind::Face => {
            face_matrix(x, n, i)?;
            (x.face_map(n, i), n - 1)
        }
        OperatorKind::Degeneracy => {
            degeneracy_matrix(x, n, i)?;
            (x.degeneracy_map(n, i), n + 1)
        }
    };
    if target.degree != expected {
        return Err(Error::invalid(format!(
            "preimage target has degree {}, expected {expected}",
            target.degree
        )));
    }
    x.check_simplex(target)?;
    Ok(map
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t == target.index)
        .map(|(k, _)| SimplexRef::new(n, k))
        .collect())
}

/// `Φ_n`, the 0/1 matrix of `φ_n`.
pub fn morphism_operator(phi: &SimplicialMorphismTable, target: &TruncatedSimplicialSet, n: usize) -> Result<LinearOperator> {
    if n > phi.cutoff() {
        return Err(Error::out_of_range("morphism operator", n, phi.cutoff()));
    }
    Ok(LinearOperator::between(n, n, IntMatrix::from_function(phi.map(n), target.count(n))))
}
