//! Boundary operators, Hodge Laplacians and Betti numbers, computed by exact
//! rank and by spectral kernels on the full and the normalized complex.

mod checks;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{degeneracy_matrix, degeneracy_projector, face_matrix, LinearOperator};
use crate::linalg::{exact, spectral::SymSpectrum, IntMatrix};
use crate::sset::TruncatedSimplicialSet;

pub use checks::{
    chain_equivalence_check, hodge_resolution_check, induced_homology_map, laplacian_decomposition_check,
    ChainEquivalenceReport, DecompositionCheck, DecompositionReport, HodgeResolutionReport, HomologyMap,
    RESOLUTION_TOLERANCE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `Q_{D,n} = Σ (−1)^i D_{n,i}`, degree `n → n-1`.
    Face,
    /// `Q_{S,n} = Σ (−1)^i S_{n,i}`, degree `n → n+1`.
    Degeneracy,
}

pub fn boundary_operator(x: &TruncatedSimplicialSet, kind: BoundaryKind, n: usize) -> Result<LinearOperator> {
    Ok(match kind {
        BoundaryKind::Face => LinearOperator::between(n, n.wrapping_sub(1), face_boundary(x, n)?),
        BoundaryKind::Degeneracy => LinearOperator::between(n, n + 1, degeneracy_coboundary(x, n)?),
    })
}

fn alternating(terms: impl Iterator<Item = Result<IntMatrix>>) -> Result<IntMatrix> {
    let mut acc: Option<IntMatrix> = None;
    for (i, t) in terms.enumerate() {
        let t = if i % 2 == 0 { t? } else { t?.scale(-1) };
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.expect("at least one term"))
}

pub(crate) fn face_boundary(x: &TruncatedSimplicialSet, n: usize) -> Result<IntMatrix> {
    if n == 0 || n > x.cutoff() {
        return Err(Error::out_of_range(format!("face boundary Q_D{n}"), n.max(1), x.cutoff()));
    }
    alternating((0..=n).map(|i| face_matrix(x, n, i)))
}

pub(crate) fn degeneracy_coboundary(x: &TruncatedSimplicialSet, n: usize) -> Result<IntMatrix> {
    if n + 1 > x.cutoff() {
        return Err(Error::out_of_range(format!("degeneracy coboundary Q_S{n}"), n + 1, x.cutoff()));
    }
    alternating((0..=n).map(|i| degeneracy_matrix(x, n, i)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    DD,
    SD,
    SS,
}

/// `H_DD,n = Q_nᵀQ_n + Q_{n+1}Q_{n+1}ᵀ`, `H_SD,n = Q_{S,n-2}ᵀQ_{D,n} + Q_{D,n-1}Q_{S,n-1}ᵀ`
/// (degree `n → n-2`) and `H_SS,n = Q_{S,n}ᵀQ_{S,n} + Q_{S,n-1}Q_{S,n-1}ᵀ`.
///
/// At `n = N` the face Laplacian drops the term that would need degree
/// `N+1`; such results are truncation-sensitive.
pub fn hodge_laplacian(x: &TruncatedSimplicialSet, kind: LaplacianKind, n: usize) -> Result<LinearOperator> {
    let big_n = x.cutoff();
    match kind {
        LaplacianKind::DD => {
            if n > big_n {
                return Err(Error::out_of_range(format!("face Laplacian H_DD{n}"), n, big_n));
            }
            Ok(LinearOperator::between(n, n, full_complex(x).laplacian(n)))
        }
        LaplacianKind::SD => {
            if n < 2 || n > big_n {
                return Err(Error::out_of_range(format!("mixed Laplacian H_SD{n}"), n.max(2), big_n));
            }
            let m = degeneracy_coboundary(x, n - 2)?
                .transpose()
                .mul(&face_boundary(x, n)?)
                .add(&face_boundary(x, n - 1)?.mul(&degeneracy_coboundary(x, n - 1)?.transpose()));
            Ok(LinearOperator::between(n, n - 2, m))
        }
        LaplacianKind::SS => {
            let q = degeneracy_coboundary(x, n)?;
            let mut m = q.transpose().mul(&q);
            if n >= 1 {
                let p = degeneracy_coboundary(x, n - 1)?;
                m = m.add(&p.mul(&p.transpose()));
            }
            Ok(LinearOperator::between(n, n, m))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Full,
    Normalized,
}

/// A chain complex `C_0 ← C_1 ← … ← C_N` with integer boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexView {
    pub basis: Basis,
    /// Simplex indices spanning each degree, ascending.
    pub simplices: Vec<Vec<usize>>,
    /// `boundaries[n]` maps degree `n` to `n-1`; `boundaries[0]` has no rows.
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplexView {
    pub fn cutoff(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.simplices[n].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n]
    }

    /// `QᵀQ + Q'Q'ᵀ` in degree `n`, without the outgoing term at the cutoff.
    pub fn laplacian(&self, n: usize) -> IntMatrix {
        let q = &self.boundaries[n];
        let mut h = q.transpose().mul(q);
        if n < self.cutoff() {
            let up = &self.boundaries[n + 1];
            h = h.add(&up.mul(&up.transpose()));
        }
        h
    }

    /// Offset of degree `n` in the direct sum over all degrees.
    pub fn offset(&self, n: usize) -> usize {
        self.simplices[..n].iter().map(Vec::len).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    fn check_homological(&self) -> Result<()> {
        for n in 2..=self.cutoff() {
            if !self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero() {
                return Err(Error::invariant(format!(
                    "boundary squared is nonzero in degree {n} of the {:?} complex",
                    self.basis
                )));
            }
        }
        Ok(())
    }
}

/// The complex on all simplices, with `Q = Q_D`.
pub fn full_complex(x: &TruncatedSimplicialSet) -> ChainComplexView {
    let big_n = x.cutoff();
    let mut boundaries = vec![IntMatrix::zeros(0, x.count(0))];
    for n in 1..=big_n {
        boundaries.push(face_boundary(x, n).expect("degree in range"));
    }
    ChainComplexView {
        basis: Basis::Full,
        simplices: (0..=big_n).map(|n| (0..x.count(n)).collect()).collect(),
        boundaries,
    }
}

/// The complex on non-degenerate simplices: `(1 − Π_{n-1}) Q_D (1 − Π_n)`
/// restricted to the non-degenerate basis.
///
/// The restriction is computed from the projectors and compared with the
/// direct rule that drops degenerate faces.
pub fn normalized_complex(x: &TruncatedSimplicialSet) -> Result<ChainComplexView> {
    let big_n = x.cutoff();
    let simplices: Vec<Vec<usize>> = (0..=big_n).map(|n| x.nondegenerate(n)).collect();
    let mut boundaries = vec![IntMatrix::zeros(0, simplices[0].len())];
    let mut complement_prev = complement(x, 0)?;
    for n in 1..=big_n {
        let complement_n = complement(x, n)?;
        let projected = complement_prev.mul(&face_boundary(x, n)?).mul(&complement_n);
        let restricted = projected.select(&simplices[n - 1], &simplices[n]);
        let position: std::collections::HashMap<usize, usize> =
            simplices[n - 1].iter().enumerate().map(|(r, &k)| (k, r)).collect();
        let mut entries = Vec::new();
        for (c, &k) in simplices[n].iter().enumerate() {
            for i in 0..=n {
                if let Some(&r) = position.get(&x.face(n, i, k)) {
                    entries.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        let direct = IntMatrix::from_triplets(simplices[n - 1].len(), simplices[n].len(), entries);
        if direct != restricted {
            return Err(Error::invariant(format!(
                "normalized boundary in degree {n} differs between projector and face-dropping rule"
            )));
        }
        boundaries.push(restricted);
        complement_prev = complement_n;
    }
    let view = ChainComplexView {
        basis: Basis::Normalized,
        simplices,
        boundaries,
    };
    view.check_homological()?;
    Ok(view)
}

/// `1 − Π_n`.
pub(crate) fn complement(x: &TruncatedSimplicialSet, n: usize) -> Result<IntMatrix> {
    Ok(IntMatrix::identity(x.count(n)).sub(&degeneracy_projector(x, n)?))
}

pub fn chain_complex(x: &TruncatedSimplicialSet, basis: Basis) -> Result<ChainComplexView> {
    match basis {
        Basis::Full => {
            let view = full_complex(x);
            view.check_homological()?;
            Ok(view)
        }
        Basis::Normalized => normalized_complex(x),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BettiMethod {
    ExactRank,
    Hodge,
    NormalizedHodge,
}

impl BettiMethod {
    pub const ALL: [BettiMethod; 3] = [BettiMethod::ExactRank, BettiMethod::Hodge, BettiMethod::NormalizedHodge];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiResult {
    pub degree: usize,
    pub value: usize,
    pub method: BettiMethod,
    /// Degrees up to this one are unaffected by the truncation.
    pub valid_up_to: usize,
    pub truncation_sensitive: bool,
}

/// `β_n` by one method. At `n = N` the result uses the truncated Laplacian
/// (or omits the missing rank term) and is flagged.
pub fn betti(x: &TruncatedSimplicialSet, n: usize, method: BettiMethod) -> Result<BettiResult> {
    let big_n = x.cutoff();
    if n > big_n {
        return Err(Error::out_of_range(format!("Betti number in degree {n}"), n, big_n));
    }
    let view = match method {
        BettiMethod::NormalizedHodge => normalized_complex(x)?,
        _ => full_complex(x),
    };
    betti_from_view(&view, n, method)
}

/// `β_0 … β_N` by one method, building the complex once.
pub fn betti_numbers(x: &TruncatedSimplicialSet, method: BettiMethod) -> Result<Vec<BettiResult>> {
    let view = match method {
        BettiMethod::NormalizedHodge => normalized_complex(x)?,
        _ => full_complex(x),
    };
    (0..=x.cutoff()).map(|n| betti_from_view(&view, n, method)).collect()
}

fn betti_from_view(view: &ChainComplexView, n: usize, method: BettiMethod) -> Result<BettiResult> {
    let big_n = view.cutoff();
    let value = match method {
        BettiMethod::ExactRank => {
            let down = if n == 0 { 0 } else { exact::rank(view.boundary(n)) };
            let up = if n < big_n { exact::rank(view.boundary(n + 1)) } else { 0 };
            view.dim(n) - down - up
        }
        BettiMethod::Hodge | BettiMethod::NormalizedHodge => SymSpectrum::of_int(&view.laplacian(n))?.kernel_dim(),
    };
    Ok(BettiResult {
        degree: n,
        value,
        method,
        valid_up_to: big_n.saturating_sub(1),
        truncation_sensitive: n == big_n,
    })
}

/// Checks `Q_D Q_D = 0`, `Q_S Q_S = 0` and `Q_{S,n-1}Q_{D,n} + Q_{D,n+1}Q_{S,n} = 0`
/// wherever the operators exist.
pub fn check_boundary_relations(x: &TruncatedSimplicialSet) -> Result<()> {
    let big_n = x.cutoff();
    for n in 2..=big_n {
        if !face_boundary(x, n - 1)?.mul(&face_boundary(x, n)?).is_zero() {
            return Err(Error::invariant(format!("Q_D Q_D is nonzero in degree {n}")));
        }
    }
    for n in 0..big_n.saturating_sub(1) {
        if !degeneracy_coboundary(x, n + 1)?.mul(&degeneracy_coboundary(x, n)?).is_zero() {
            return Err(Error::invariant(format!("Q_S Q_S is nonzero in degree {n}")));
        }
    }
    for n in 1..big_n {
        let mixed = degeneracy_coboundary(x, n - 1)?
            .mul(&face_boundary(x, n)?)
            .add(&face_boundary(x, n + 1)?.mul(&degeneracy_coboundary(x, n)?));
        if !mixed.is_zero() {
            return Err(Error::invariant(format!("mixed boundary relation fails in degree {n}")));
        }
    }
    Ok(())
}

/// The diagonal of `H_SS,n` predicted by counting: `n + 1 − Σ_i |𝔖_{n-1,i}(σ)|`.
pub fn degeneracy_laplacian_diagonal(x: &TruncatedSimplicialSet, n: usize) -> Vec<i64> {
    (0..x.count(n))
        .map(|k| {
            let hits = (0..n)
                .filter(|&i| {
                    let below = x.face(n, i, k);
                    x.degeneracy(n - 1, i, below) == k
                })
                .count();
            (n + 1 - hits) as i64
        })
        .collect()
}
