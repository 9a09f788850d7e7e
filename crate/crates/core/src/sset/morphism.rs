use serde::Serialize;

use super::{FiniteGroupTable, Relation, TruncatedSimplicialSet, ValidationReport};
use crate::error::{Error, Result};

/// Per-degree index maps `φ_n : X_n → X'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialMorphismTable {
    maps: Vec<Vec<usize>>,
}

impl SimplicialMorphismTable {
    /// Checks shapes against source and target. Commutation with faces and
    /// degeneracies is checked by [`morphism_validate`].
    pub fn new(maps: Vec<Vec<usize>>, source: &TruncatedSimplicialSet, target: &TruncatedSimplicialSet) -> Result<Self> {
        if source.cutoff() != target.cutoff() {
            return Err(Error::invalid(format!(
                "morphism needs equal cutoffs, got {} and {}",
                source.cutoff(),
                target.cutoff()
            )));
        }
        if maps.len() != source.cutoff() + 1 {
            return Err(Error::invalid(format!("morphism needs {} degree maps", source.cutoff() + 1)));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.len() != source.count(n) {
                return Err(Error::invalid(format!(
                    "degree-{n} map has {} entries, source has {} simplices",
                    m.len(),
                    source.count(n)
                )));
            }
            if m.iter().any(|&v| v >= target.count(n)) {
                return Err(Error::invalid(format!("degree-{n} map leaves the target")));
            }
        }
        Ok(SimplicialMorphismTable { maps })
    }

    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMorphismTable {
            maps: (0..=x.cutoff()).map(|n| (0..x.count(n)).collect()).collect(),
        }
    }

    /// Constant map onto a one-simplex-per-degree target.
    pub fn to_point(x: &TruncatedSimplicialSet, point: &TruncatedSimplicialSet) -> Result<Self> {
        if point.counts().iter().any(|&c| c != 1) {
            return Err(Error::invalid("target is not a point"));
        }
        Self::new((0..=x.cutoff()).map(|n| vec![0; x.count(n)]).collect(), x, point)
    }

    /// The nerve map induced by a group homomorphism, given on elements.
    ///
    /// Both sets must be group nerves built from `from` and `to` with the
    /// same cutoff; strings map componentwise.
    pub fn from_group_homomorphism(
        source: &TruncatedSimplicialSet,
        target: &TruncatedSimplicialSet,
        from: &FiniteGroupTable,
        to: &FiniteGroupTable,
        map: &[usize],
    ) -> Result<Self> {
        if !from.is_homomorphism(to, map) {
            return Err(Error::invalid("element map is not a group homomorphism"));
        }
        let (p, q) = (from.order(), to.order());
        let maps = (0..=source.cutoff())
            .map(|n| {
                (0..source.count(n))
                    .map(|k| {
                        // nerve strings are base-|G| numerals, most significant first
                        let mut digits = Vec::with_capacity(n);
                        let mut rest = k;
                        for _ in 0..n {
                            digits.push(rest % p);
                            rest /= p;
                        }
                        digits.iter().rev().fold(0, |acc, &g| acc * q + map[g])
                    })
                    .collect()
            })
            .collect();
        Self::new(maps, source, target)
    }

    pub fn cutoff(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn map(&self, n: usize) -> &[usize] {
        &self.maps[n]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SimplicialMorphismTable) -> SimplicialMorphismTable {
        SimplicialMorphismTable {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(a, b)| a.iter().map(|&k| b[k]).collect())
                .collect(),
        }
    }
}

/// Checks `φ_{n-1} d_i = d'_i φ_n` and `φ_{n+1} s_i = s'_i φ_n` everywhere.
/// The `j` field of each violation is unused.
pub fn morphism_validate(
    phi: &SimplicialMorphismTable,
    x: &TruncatedSimplicialSet,
    y: &TruncatedSimplicialSet,
) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for n in 0..=x.cutoff() {
        for k in 0..x.count(n) {
            if n >= 1 {
                for i in 0..=n {
                    let lhs = phi.map(n - 1)[x.face(n, i, k)];
                    let rhs = y.face(n, i, phi.map(n)[k]);
                    rep.check(lhs == rhs, Relation::MorphismFace, n, i, 0, k);
                }
            }
            if n < x.cutoff() {
                for i in 0..=n {
                    let lhs = phi.map(n + 1)[x.degeneracy(n, i, k)];
                    let rhs = y.degeneracy(n, i, phi.map(n)[k]);
                    rep.check(lhs == rhs, Relation::MorphismDegeneracy, n, i, 0, k);
                }
            }
        }
    }
    rep
}
