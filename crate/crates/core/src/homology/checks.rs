use nalgebra::DMatrix;
use serde::Serialize;

use super::{chain_complex, complement, face_boundary, full_complex, normalized_complex, Basis, LaplacianKind};
use crate::error::{Error, Result};
use crate::hilbert::{auxiliary_operator, defect, degeneracy_projector, face_matrix, AuxiliaryKind, DefectKind};
use crate::linalg::{exact::RatMatrix, spectral::max_abs_diff, spectral::SymSpectrum, IntMatrix};
use crate::sset::{morphism_validate, SimplicialMorphismTable, TruncatedSimplicialSet};

/// Residual allowed in floating-point operator identities.
pub const RESOLUTION_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub laplacian: LaplacianKind,
    /// Laplacian equals `Υ + Υ'ᵀ + H⁰` exactly.
    pub holds: bool,
    /// Entries where the two sides differ.
    pub mismatched_entries: usize,
    /// The defect-built `Υ` terms vanish.
    pub upsilon_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub checks: Vec<DecompositionCheck>,
}

impl DecompositionReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, kind: LaplacianKind) -> Option<&DecompositionCheck> {
        self.checks.iter().find(|c| c.laplacian == kind)
    }
}

fn signed_defect_sum(x: &TruncatedSimplicialSet, kind: DefectKind, n: usize, rows: usize) -> Result<IntMatrix> {
    let mut acc = IntMatrix::zeros(rows, x.count(n));
    for j in 0..=n {
        for i in 0..=j {
            // the diagonal DD defects are absorbed into Θ
            if kind.index_allowed(i, j) && !(kind == DefectKind::DD && i == j) {
                let d = defect(x, kind, n, i, j)?.matrix;
                acc = acc.add(&if (i + j) % 2 == 0 { d } else { d.scale(-1) });
            }
        }
    }
    Ok(acc)
}

fn compare(kind: LaplacianKind, lhs: &IntMatrix, rhs: &IntMatrix, upsilon_zero: bool) -> DecompositionCheck {
    let diff = lhs.sub(rhs);
    DecompositionCheck {
        laplacian: kind,
        holds: diff.is_zero(),
        mismatched_entries: diff.nnz(),
        upsilon_zero,
    }
}

/// Rebuilds each Laplacian in degree `n` from defects and the auxiliary
/// operators and compares it with `QᵀQ + QQᵀ`:
///
/// - `H_DD = Υ_DD + Υ_DDᵀ + ΣΩ + Σ(Θ − Γ − Γᵀ)`
/// - `H_SD,n = Υ_SD,n + Υ_DS,n-2ᵀ + Σ D_{n-1,i}D_{n,i+1}Π_{n,i} − Σ D_{n-1,i}Π_{n-1,i}D_{n,i+1}`
/// - `H_SS = (n+1)·1 − Σ Π_{n,i}`
///
/// Only the Laplacians whose operators exist below the cutoff are checked.
pub fn laplacian_decomposition_check(x: &TruncatedSimplicialSet, n: usize) -> Result<DecompositionReport> {
    let big_n = x.cutoff();
    let size = x.count(n);
    let mut checks = Vec::new();
    let aux = |kind| auxiliary_operator(x, kind).map(|op| op.matrix);
    if n < big_n {
        let h = full_complex(x).laplacian(n);
        let upsilon = if n == 0 {
            IntMatrix::zeros(size, size)
        } else {
            signed_defect_sum(x, DefectKind::DD, n, size)?
        };
        let mut h0 = IntMatrix::zeros(size, size);
        for i in 0..=n + 1 {
            h0 = h0.add(&aux(AuxiliaryKind::Omega { n, i })?);
        }
        for i in 0..=n {
            let gamma = aux(AuxiliaryKind::Gamma { n, i })?;
            h0 = h0.add(&aux(AuxiliaryKind::Theta { n, i })?).sub(&gamma).sub(&gamma.transpose());
        }
        let rebuilt = upsilon.add(&upsilon.transpose()).add(&h0);
        checks.push(compare(LaplacianKind::DD, &h, &rebuilt, upsilon.is_zero()));
    }
    if n >= 2 {
        let h = super::hodge_laplacian(x, LaplacianKind::SD, n)?.matrix;
        let rows = x.count(n - 2);
        let upsilon_sd = signed_defect_sum(x, DefectKind::SD, n, rows)?;
        let upsilon_ds = signed_defect_sum(x, DefectKind::DS, n - 2, x.count(n))?;
        let mut h0 = IntMatrix::zeros(rows, size);
        for i in 0..n {
            let term = face_matrix(x, n - 1, i)?
                .mul(&face_matrix(x, n, i + 1)?)
                .mul(&aux(AuxiliaryKind::PiI { n, i })?);
            h0 = h0.add(&term);
        }
        for i in 0..n - 1 {
            let term = face_matrix(x, n - 1, i)?
                .mul(&aux(AuxiliaryKind::PiI { n: n - 1, i })?)
                .mul(&face_matrix(x, n, i + 1)?);
            h0 = h0.sub(&term);
        }
        let rebuilt = upsilon_sd.add(&upsilon_ds.transpose()).add(&h0);
        checks.push(compare(
            LaplacianKind::SD,
            &h,
            &rebuilt,
            upsilon_sd.is_zero() && upsilon_ds.is_zero(),
        ));
    }
    if n < big_n {
        let h = super::hodge_laplacian(x, LaplacianKind::SS, n)?.matrix;
        let mut h0 = IntMatrix::identity(size).scale(n as i64 + 1);
        for i in 0..n {
            h0 = h0.sub(&aux(AuxiliaryKind::PiI { n, i })?);
        }
        checks.push(compare(LaplacianKind::SS, &h, &h0, true));
    }
    if checks.is_empty() {
        return Err(Error::out_of_range(format!("Laplacian decomposition in degree {n}"), n + 1, big_n));
    }
    Ok(DecompositionReport { n, checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEquivalenceDegree {
    pub n: usize,
    /// `(1 − Π_{n-1}) Q_D Π_n = 0`.
    pub degenerate_boundaries_degenerate: bool,
    /// `I Q̄ = ᶜQ I` on representatives.
    pub projection_intertwines: bool,
    /// `J ᶜQ = Q̄ J` modulo degenerate chains.
    pub inclusion_intertwines: bool,
    /// `I J = id` on the non-degenerate space.
    pub projection_after_inclusion: bool,
    /// `J I = id` on the quotient.
    pub inclusion_after_projection: bool,
    /// The restricted boundary equals the normalized complex.
    pub matches_normalized_boundary: bool,
}

impl ChainEquivalenceDegree {
    pub fn holds(&self) -> bool {
        self.degenerate_boundaries_degenerate
            && self.projection_intertwines
            && self.inclusion_intertwines
            && self.projection_after_inclusion
            && self.inclusion_after_projection
            && self.matches_normalized_boundary
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEquivalenceReport {
    pub n_max: usize,
    pub degrees: Vec<ChainEquivalenceDegree>,
}

impl ChainEquivalenceReport {
    pub fn all_hold(&self) -> bool {
        self.degrees.iter().all(ChainEquivalenceDegree::holds)
    }
}

/// Compares the quotient by degenerate chains with the non-degenerate
/// subcomplex in degrees `0 … n_max`.
///
/// A quotient class is represented by any full chain `v`, two chains being
/// equal when `(1 − Π)(v − w) = 0`. `I` sends `[v]` to `(1 − Π)v` and `J`
/// sends a non-degenerate chain to its class. Each identity is checked as
/// an exact integer matrix equation.
pub fn chain_equivalence_check(x: &TruncatedSimplicialSet, n_max: usize) -> Result<ChainEquivalenceReport> {
    if n_max + 1 > x.cutoff() {
        return Err(Error::out_of_range("chain equivalence check", n_max + 1, x.cutoff()));
    }
    let normalized = normalized_complex(x)?;
    let mut degrees = Vec::new();
    for n in 0..=n_max {
        let c_n = complement(x, n)?;
        let one = IntMatrix::identity(x.count(n));
        let mut entry = ChainEquivalenceDegree {
            n,
            degenerate_boundaries_degenerate: true,
            projection_intertwines: true,
            inclusion_intertwines: true,
            projection_after_inclusion: c_n.mul(&c_n) == c_n,
            inclusion_after_projection: c_n.mul(&c_n.sub(&one)).is_zero(),
            matches_normalized_boundary: true,
        };
        if n >= 1 {
            let c_prev = complement(x, n - 1)?;
            let q = face_boundary(x, n)?;
            let reduced = c_prev.mul(&q).mul(&c_n);
            entry.degenerate_boundaries_degenerate = c_prev.mul(&q).mul(&degeneracy_projector(x, n)?).is_zero();
            entry.projection_intertwines = c_prev.mul(&q) == reduced;
            entry.inclusion_intertwines = c_prev.mul(&reduced.sub(&q.mul(&c_n))).is_zero();
            entry.matches_normalized_boundary =
                reduced.select(&normalized.simplices[n - 1], &normalized.simplices[n]) == *normalized.boundary(n);
        }
        degrees.push(entry);
    }
    Ok(ChainEquivalenceReport { n_max, degrees })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HodgeResolutionReport {
    pub basis: Basis,
    pub n: usize,
    pub kernel_dim: usize,
    /// `max |1 − P − QᵀH⁺Q − Q'H'⁺Q'ᵀ|`.
    pub identity_residual: f64,
    /// `max |Q H⁺ − H⁺ Q|` over the adjacent boundaries.
    pub pseudo_inverse_residual: f64,
    /// `max |P_float − P_exact|`.
    pub projector_residual: f64,
    /// Boundaries annihilate the exact kernel projector on both sides.
    pub annihilation_exact: bool,
    /// `Q H = H Q` in integer arithmetic.
    pub intertwining_exact: bool,
}

impl HodgeResolutionReport {
    pub fn passed(&self) -> bool {
        self.identity_residual < RESOLUTION_TOLERANCE
            && self.pseudo_inverse_residual < RESOLUTION_TOLERANCE
            && self.projector_residual < RESOLUTION_TOLERANCE
            && self.annihilation_exact
            && self.intertwining_exact
    }
}

/// Verifies the orthogonal splitting of degree `n` into harmonic chains,
/// boundaries and the image of the adjoint boundary, using spectral
/// projectors and pseudo-inverses, plus the exact kernel over ℚ.
pub fn hodge_resolution_check(x: &TruncatedSimplicialSet, basis: Basis, n: usize) -> Result<HodgeResolutionReport> {
    if n > x.cutoff() {
        return Err(Error::out_of_range("Hodge resolution", n, x.cutoff()));
    }
    let view = chain_complex(x, basis)?;
    let big_n = view.cutoff();
    let h = view.laplacian(n);
    let spec = SymSpectrum::of_int(&h)?;
    let p = spec.kernel_projector();
    let dim = view.dim(n);
    let mut resolution = DMatrix::<f64>::identity(dim, dim) - &p;
    let mut pinv_residual: f64 = 0.0;
    let exact_p = RatMatrix::from_int(&h).kernel_projector();
    let mut annihilation = true;
    let mut intertwining = true;
    let h_plus = spec.pseudo_inverse();
    if n >= 1 {
        let q = view.boundary(n);
        let h_below = view.laplacian(n - 1);
        let below_plus = SymSpectrum::of_int(&h_below)?.pseudo_inverse();
        let qf = q.to_f64();
        resolution -= qf.transpose() * &below_plus * &qf;
        pinv_residual = pinv_residual.max(max_abs_diff(&(&qf * &h_plus), &(&below_plus * &qf)));
        annihilation &= RatMatrix::from_int(q).mul(&exact_p).is_zero();
        intertwining &= q.mul(&h) == h_below.mul(q);
    }
    if n < big_n {
        let q = view.boundary(n + 1);
        let h_above = view.laplacian(n + 1);
        let above_plus = SymSpectrum::of_int(&h_above)?.pseudo_inverse();
        let qf = q.to_f64();
        resolution -= &qf * &above_plus * qf.transpose();
        pinv_residual = pinv_residual.max(max_abs_diff(&(&qf * &above_plus), &(&h_plus * &qf)));
        annihilation &= exact_p.mul(&RatMatrix::from_int(q)).is_zero();
        intertwining &= q.mul(&h_above) == h.mul(q);
    }
    Ok(HodgeResolutionReport {
        basis,
        n,
        kernel_dim: spec.kernel_dim(),
        identity_residual: resolution.iter().map(|v| v.abs()).fold(0.0, f64::max),
        pseudo_inverse_residual: pinv_residual,
        projector_residual: max_abs_diff(&p, &exact_p.to_f64()),
        annihilation_exact: annihilation,
        intertwining_exact: intertwining,
    })
}

/// A linear map between harmonic spaces, in orthonormal kernel bases.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyMap {
    pub degree: usize,
    pub matrix: DMatrix<f64>,
}

impl HomologyMap {
    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// `Φ_*` in degree `n`: `K'ᵀ Φ_n K` where `K`, `K'` are orthonormal bases of
/// `ker H_DD,n` on each side. The commutation `Φ Q = Q' Φ` is checked first.
pub fn induced_homology_map(
    phi: &SimplicialMorphismTable,
    x: &TruncatedSimplicialSet,
    y: &TruncatedSimplicialSet,
    n: usize,
) -> Result<HomologyMap> {
    if n + 1 > x.cutoff() {
        return Err(Error::out_of_range("induced homology map", n + 1, x.cutoff()));
    }
    morphism_validate(phi, x, y).into_result()?;
    let op = |m: usize| IntMatrix::from_function(phi.map(m), y.count(m));
    for m in 1..=n + 1 {
        if op(m - 1).mul(&face_boundary(x, m)?) != face_boundary(y, m)?.mul(&op(m)) {
            return Err(Error::invariant(format!("morphism does not commute with the boundary in degree {m}")));
        }
    }
    let k = SymSpectrum::of_int(&full_complex(x).laplacian(n))?.kernel_basis();
    let k_target = SymSpectrum::of_int(&full_complex(y).laplacian(n))?.kernel_basis();
    Ok(HomologyMap {
        degree: n,
        matrix: k_target.transpose() * op(n).to_f64() * k,
    })
}

