use serde::Serialize;

use super::{degeneracy_matrix, face_matrix, fibers};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Triplet};
use crate::sset::TruncatedSimplicialSet;

/// The four mixed exchange identities between an operator and an adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DefectKind {
    /// `D_{n,i}ᵀ D_{n,j} − D_{n+1,j+1} D_{n+1,i}ᵀ` on degree `n`, `i ≤ j`.
    DD,
    /// `D_{n+2,i}ᵀ S_{n,j} − S_{n+1,j+1} D_{n+1,i}ᵀ`, degree `n → n+2`, `i ≤ j`.
    DS,
    /// `S_{n-2,i}ᵀ D_{n,j} − D_{n-1,j-1} S_{n-1,i}ᵀ`, degree `n → n-2`, `i+1 < j`.
    SD,
    /// `S_{n,i}ᵀ S_{n,j} − S_{n-1,j-1} S_{n-1,i}ᵀ` on degree `n`, `i < j`.
    SS,
}

impl DefectKind {
    pub const ALL: [DefectKind; 4] = [DefectKind::DD, DefectKind::DS, DefectKind::SD, DefectKind::SS];

    pub fn index_allowed(self, i: usize, j: usize) -> bool {
        match self {
            DefectKind::DD | DefectKind::DS => i <= j,
            DefectKind::SD => i + 1 < j,
            DefectKind::SS => i < j,
        }
    }

    /// Largest admissible `j` in degree `n`.
    fn max_j(self, n: usize) -> usize {
        n
    }

    /// Degrees `n` for which every operator involved exists at cutoff `big_n`.
    pub fn degree_in_range(self, n: usize, big_n: usize) -> bool {
        match self {
            DefectKind::DD => n >= 1 && n < big_n,
            DefectKind::DS => n + 2 <= big_n,
            DefectKind::SD => n >= 2 && n <= big_n,
            DefectKind::SS => n >= 1 && n < big_n,
        }
    }

    fn target_degree(self, n: usize) -> usize {
        match self {
            DefectKind::DD | DefectKind::SS => n,
            DefectKind::DS => n + 2,
            DefectKind::SD => n - 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub kind: DefectKind,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    #[serde(skip)]
    pub matrix: IntMatrix,
    pub is_zero: bool,
}

impl DefectReport {
    pub fn triplets(&self) -> Vec<Triplet> {
        self.matrix.triplets()
    }
}

/// Computes a defect twice, from the exchange identity by matrix arithmetic
/// and from fiber counting, and returns it after checking that the two
/// agree entry by entry.
///
/// The counting form: entry `(ω, σ)` is `[ω ∈ C](1 − |A ∩ B|)` where `C` is
/// the candidate fiber and `A ∩ B` the fibers meeting in the middle degree.
pub fn defect(x: &TruncatedSimplicialSet, kind: DefectKind, n: usize, i: usize, j: usize) -> Result<DefectReport> {
    if !kind.index_allowed(i, j) || j > kind.max_j(n) {
        return Err(Error::invalid(format!("indices (i={i}, j={j}) not admissible for {kind:?} in degree {n}")));
    }
    if !kind.degree_in_range(n, x.cutoff()) {
        let needed = match kind {
            DefectKind::DD | DefectKind::SS => n + 1,
            DefectKind::DS => n + 2,
            DefectKind::SD => n,
        };
        return Err(Error::out_of_range(format!("{kind:?} defect in degree {n}"), needed.max(1), x.cutoff()));
    }
    let arithmetic = by_arithmetic(x, kind, n, i, j)?;
    let counted = by_counting(x, kind, n, i, j);
    if arithmetic != counted {
        return Err(Error::invariant(format!(
            "{kind:?} defect at (n={n}, i={i}, j={j}): counting formula disagrees with operator arithmetic"
        )));
    }
    Ok(DefectReport {
        kind,
        n,
        i,
        j,
        is_zero: arithmetic.is_zero(),
        matrix: arithmetic,
    })
}

fn by_arithmetic(x: &TruncatedSimplicialSet, kind: DefectKind, n: usize, i: usize, j: usize) -> Result<IntMatrix> {
    let d = |m: usize, k: usize| face_matrix(x, m, k);
    let s = |m: usize, k: usize| degeneracy_matrix(x, m, k);
    Ok(match kind {
        DefectKind::DD => d(n, i)?.transpose().mul(&d(n, j)?).sub(&d(n + 1, j + 1)?.mul(&d(n + 1, i)?.transpose())),
        DefectKind::DS => d(n + 2, i)?.transpose().mul(&s(n, j)?).sub(&s(n + 1, j + 1)?.mul(&d(n + 1, i)?.transpose())),
        DefectKind::SD => s(n - 2, i)?.transpose().mul(&d(n, j)?).sub(&d(n - 1, j - 1)?.mul(&s(n - 1, i)?.transpose())),
        DefectKind::SS => s(n, i)?.transpose().mul(&s(n, j)?).sub(&s(n - 1, j - 1)?.mul(&s(n - 1, i)?.transpose())),
    })
}

fn by_counting(x: &TruncatedSimplicialSet, kind: DefectKind, n: usize, i: usize, j: usize) -> IntMatrix {
    let face_fibers = |m: usize, k: usize| fibers(x.face_map(m, k), x.count(m - 1));
    let degen_fibers = |m: usize, k: usize| fibers(x.degeneracy_map(m, k), x.count(m + 1));
    let mut entries = Vec::new();
    // for each σ the candidates ω come from one fiber; a(σ) and b(ω) are the
    // two fibers meeting in the middle degree
    let mut emit = |a: &[usize], b: &[usize], sigma: usize, omega: usize| {
        let meet = a.iter().filter(|t| b.contains(t)).count() as i64;
        if meet != 1 {
            entries.push((omega, sigma, 1 - meet));
        }
    };
    match kind {
        DefectKind::DD => {
            let cand = face_fibers(n, i);
            let (a, b) = (face_fibers(n + 1, i), face_fibers(n + 1, j + 1));
            for sigma in 0..x.count(n) {
                let c = &cand[x.face(n, j, sigma)];
                for &omega in c {
                    emit(&a[sigma], &b[omega], sigma, omega);
                }
            }
        }
        DefectKind::DS => {
            let cand = face_fibers(n + 2, i);
            let (a, b) = (face_fibers(n + 1, i), degen_fibers(n + 1, j + 1));
            for sigma in 0..x.count(n) {
                let c = &cand[x.degeneracy(n, j, sigma)];
                for &omega in c {
                    emit(&a[sigma], &b[omega], sigma, omega);
                }
            }
        }
        DefectKind::SD => {
            let cand = degen_fibers(n - 2, i);
            let (a, b) = (degen_fibers(n - 1, i), face_fibers(n - 1, j - 1));
            for sigma in 0..x.count(n) {
                let c = &cand[x.face(n, j, sigma)];
                for &omega in c {
                    emit(&a[sigma], &b[omega], sigma, omega);
                }
            }
        }
        DefectKind::SS => {
            let cand = degen_fibers(n, i);
            let (a, b) = (degen_fibers(n - 1, i), degen_fibers(n - 1, j - 1));
            for sigma in 0..x.count(n) {
                let c = &cand[x.degeneracy(n, j, sigma)];
                for &omega in c {
                    emit(&a[sigma], &b[omega], sigma, omega);
                }
            }
        }
    }
    IntMatrix::from_triplets(x.count(kind.target_degree(n)), x.count(n), entries)
}

/// Nesting of the vanishing conditions on defects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerfectnessClass {
    None,
    SemiPerfect,
    QuasiPerfect,
    Perfect,
}

/// First nonzero defect found in one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectWitness {
    pub family: &'static str,
    pub kind: DefectKind,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub nonzeros: usize,
    pub entries: Vec<Triplet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectnessReport {
    pub class: PerfectnessClass,
    pub scan_depth: usize,
    pub defects_checked: usize,
    pub dd_diagonal_zero: bool,
    pub dd_off_diagonal_zero: bool,
    pub ds_zero: bool,
    pub sd_zero: bool,
    pub ss_zero: bool,
    pub witnesses: Vec<DefectWitness>,
}

/// Scans every defect of degree `n ≤ scan_depth` and classifies:
/// semi-perfect when all DS and SD defects vanish, quasi-perfect when in
/// addition DD vanishes for `i < j`, perfect when DD vanishes for all `i ≤ j`.
pub fn perfectness_class(x: &TruncatedSimplicialSet, scan_depth: usize) -> Result<PerfectnessReport> {
    if scan_depth + 2 > x.cutoff() {
        return Err(Error::out_of_range(
            format!("perfectness scan to depth {scan_depth}"),
            scan_depth + 2,
            x.cutoff(),
        ));
    }
    let families = ["dd_diagonal", "dd_off_diagonal", "ds", "sd", "ss"];
    let mut first: [Option<DefectWitness>; 5] = Default::default();
    let mut checked = 0;
    for kind in DefectKind::ALL {
        for n in 0..=scan_depth {
            if !kind.degree_in_range(n, x.cutoff()) {
                continue;
            }
            for j in 0..=kind.max_j(n) {
                for i in 0..=j {
                    if !kind.index_allowed(i, j) {
                        continue;
                    }
                    let rep = defect(x, kind, n, i, j)?;
                    checked += 1;
                    let slot = match kind {
                        DefectKind::DD if i == j => 0,
                        DefectKind::DD => 1,
                        DefectKind::DS => 2,
                        DefectKind::SD => 3,
                        DefectKind::SS => 4,
                    };
                    if !rep.is_zero && first[slot].is_none() {
                        first[slot] = Some(DefectWitness {
                            family: families[slot],
                            kind,
                            n,
                            i,
                            j,
                            nonzeros: rep.matrix.nnz(),
                            entries: rep.matrix.triplets().into_iter().take(16).collect(),
                        });
                    }
                }
            }
        }
    }
    let zero = |k: usize| first[k].is_none();
    let semi = zero(2) && zero(3);
    let class = if semi && zero(0) && zero(1) {
        PerfectnessClass::Perfect
    } else if semi && zero(1) {
        PerfectnessClass::QuasiPerfect
    } else if semi {
        PerfectnessClass::SemiPerfect
    } else {
        PerfectnessClass::None
    };
    Ok(PerfectnessReport {
        class,
        scan_depth,
        defects_checked: checked,
        dd_diagonal_zero: zero(0),
        dd_off_diagonal_zero: zero(1),
        ds_zero: zero(2),
        sd_zero: zero(3),
        ss_zero: zero(4),
        witnesses: first.into_iter().flatten().collect(),
    })
}
