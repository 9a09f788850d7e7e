//! Truncated simplicial sets: construction, validation, degeneracy
//! classification and Eilenberg–Zilber normal forms.

mod builders;
mod category;
mod ez;
mod morphism;
mod skeleton;

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use builders::{
    build_discrete, build_discrete_group, build_from_cells, build_from_complex, build_nerve, build_nerve_group,
    disjoint_union, product, Cell, OrderedComplexTable,
};
pub use category::{FiniteCategoryTable, FiniteGroupTable, MorphismEntry};
pub use ez::{apply_degeneracy, EzForm};
pub use morphism::{morphism_validate, SimplicialMorphismTable};
pub use skeleton::skeleton_extend;

/// A simplex given by degree and position in that degree's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplexRef {
    pub degree: usize,
    pub index: usize,
}

impl SimplexRef {
    pub fn new(degree: usize, index: usize) -> Self {
        SimplexRef { degree, index }
    }
}

/// How a simplicial set was produced.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Discrete { set_size: usize },
    DiscreteGroup { group: FiniteGroupTable },
    NerveCategory { objects: usize, morphisms: usize },
    NerveGroup { group: FiniteGroupTable },
    OrderedComplex { vertex_count: usize, simplices: usize },
    Cells,
    Explicit,
    Product { factors: Vec<Provenance> },
    DisjointUnion { summands: Vec<Provenance> },
    SkeletonExtend { base: Box<Provenance>, from: usize },
    Truncate { base: Box<Provenance>, from: usize },
}

impl Provenance {
    /// The group behind a discrete-group set or a group nerve, looking
    /// through truncations.
    pub fn group(&self) -> Option<(&FiniteGroupTable, bool)> {
        match self {
            Provenance::DiscreteGroup { group } => Some((group, false)),
            Provenance::NerveGroup { group } => Some((group, true)),
            Provenance::Truncate { base, .. } => base.group(),
            _ => None,
        }
    }
}

/// Simplicial relations, plus the two conditions a morphism must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `d_i d_j = d_{j-1} d_i` for `i < j`.
    FaceFace,
    /// `d_i s_j = s_{j-1} d_i` for `i < j`.
    FaceDegeneracyBelow,
    /// `d_i s_j = id` for `i = j, j+1`.
    FaceDegeneracyIdentity,
    /// `d_i s_j = s_j d_{i-1}` for `i > j+1`.
    FaceDegeneracyAbove,
    /// `s_i s_j = s_{j+1} s_i` for `i ≤ j`.
    DegeneracyDegeneracy,
    /// A morphism commutes with faces: `φ d_i = d'_i φ`.
    MorphismFace,
    /// A morphism commutes with degeneracies: `φ s_i = s'_i φ`.
    MorphismDegeneracy,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::FaceFace => "d_i d_j = d_(j-1) d_i (i<j)",
            Relation::FaceDegeneracyBelow => "d_i s_j = s_(j-1) d_i (i<j)",
            Relation::FaceDegeneracyIdentity => "d_i s_j = id (i=j,j+1)",
            Relation::FaceDegeneracyAbove => "d_i s_j = s_j d_(i-1) (i>j+1)",
            Relation::DegeneracyDegeneracy => "s_i s_j = s_(j+1) s_i (i<=j)",
            Relation::MorphismFace => "phi d_i = d'_i phi",
            Relation::MorphismDegeneracy => "phi s_i = s'_i phi",
        };
        f.write_str(s)
    }
}

/// One failed instance of a simplicial relation, evaluated on the simplex of
/// degree `n` at position `simplex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: Relation,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub simplex: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn check(&mut self, ok: bool, relation: Relation, n: usize, i: usize, j: usize, simplex: usize) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation {
                relation,
                n,
                i,
                j,
                simplex,
            });
        }
    }

    /// Error naming the first violation, if any.
    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::invalid(format!(
                "simplicial relation {} fails at n={}, i={}, j={}, simplex {} ({} violations total)",
                v.relation,
                v.n,
                v.i,
                v.j,
                v.simplex,
                self.violations.len()
            ))),
        }
    }
}

/// An `N`-truncated simplicial set stored as explicit index tables.
///
/// `faces[n][i]` maps degree `n` to degree `n-1` for `1 ≤ n ≤ N`;
/// `degeneracies[n][i]` maps degree `n` to degree `n+1` for `n < N`.
/// Simplex order is fixed at construction, which keeps every derived matrix
/// deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSimplicialSet {
    cutoff: usize,
    labels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
    provenance: Provenance,
}

impl TruncatedSimplicialSet {
    /// Assembles a set from tables, checking shapes, ranges and label
    /// uniqueness. The simplicial relations are checked by [`Self::validate`].
    pub fn from_tables(
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
        provenance: Provenance,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("a simplicial set needs at least degree 0"));
        }
        let cutoff = labels.len() - 1;
        for (n, l) in labels.iter().enumerate() {
            let mut seen = HashSet::new();
            if let Some(dup) = l.iter().find(|s| !seen.insert(s.as_str())) {
                return Err(Error::invalid(format!("duplicate label {dup:?} in degree {n}")));
            }
        }
        if labels[0].is_empty() {
            return Err(Error::invalid("degree 0 is empty"));
        }
        if faces.len() != cutoff + 1 || !faces[0].is_empty() {
            return Err(Error::invalid(format!(
                "face tables must cover degrees 1..={cutoff} (with an empty entry for degree 0)"
            )));
        }
        if degeneracies.len() != cutoff {
            return Err(Error::invalid(format!("degeneracy tables must cover degrees 0..{cutoff}")));
        }
        for n in 1..=cutoff {
            if faces[n].len() != n + 1 {
                return Err(Error::invalid(format!("degree {n} needs {} face maps", n + 1)));
            }
            for (i, map) in faces[n].iter().enumerate() {
                check_map(map, labels[n].len(), labels[n - 1].len(), || format!("face d_{n},{i}"))?;
            }
        }
        for n in 0..cutoff {
            if degeneracies[n].len() != n + 1 {
                return Err(Error::invalid(format!("degree {n} needs {} degeneracy maps", n + 1)));
            }
            for (i, map) in degeneracies[n].iter().enumerate() {
                check_map(map, labels[n].len(), labels[n + 1].len(), || format!("degeneracy s_{n},{i}"))?;
            }
        }
        Ok(TruncatedSimplicialSet {
            cutoff,
            labels,
            faces,
            degeneracies,
            provenance,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Number of simplices of degree `n`.
    pub fn count(&self, n: usize) -> usize {
        self.labels[n].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn label(&self, s: SimplexRef) -> &str {
        &self.labels[s.degree][s.index]
    }

    pub fn find(&self, n: usize, label: &str) -> Option<usize> {
        self.labels.get(n)?.iter().position(|l| l == label)
    }

    /// The face map `d_{n,i}` as an index table.
    pub fn face_map(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    /// The degeneracy map `s_{n,i}` as an index table.
    pub fn degeneracy_map(&self, n: usize, i: usize) -> &[usize] {
        &self.degeneracies[n][i]
    }

    pub fn face(&self, n: usize, i: usize, k: usize) -> usize {
        self.faces[n][i][k]
    }

    pub fn degeneracy(&self, n: usize, i: usize, k: usize) -> usize {
        self.degeneracies[n][i][k]
    }

    pub fn check_simplex(&self, s: SimplexRef) -> Result<()> {
        if s.degree > self.cutoff {
            return Err(Error::out_of_range("simplex", s.degree, self.cutoff));
        }
        if s.index >= self.count(s.degree) {
            return Err(Error::invalid(format!(
                "simplex index {} out of range in degree {} ({} simplices)",
                s.index,
                s.degree,
                self.count(s.degree)
            )));
        }
        Ok(())
    }

    /// Checks all five relation families wherever every participating map
    /// exists within the truncation.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let big_n = self.cutoff;
        for n in 0..=big_n {
            for k in 0..self.count(n) {
                if n >= 2 {
                    for j in 0..=n {
                        for i in 0..j {
                            let lhs = self.face(n - 1, i, self.face(n, j, k));
                            let rhs = self.face(n - 1, j - 1, self.face(n, i, k));
                            rep.check(lhs == rhs, Relation::FaceFace, n, i, j, k);
                        }
                    }
                }
                if n < big_n {
                    for j in 0..=n {
                        let sj = self.degeneracy(n, j, k);
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, i, sj);
                            if i == j || i == j + 1 {
                                rep.check(lhs == k, Relation::FaceDegeneracyIdentity, n, i, j, k);
                            } else if i < j {
                                let rhs = self.degeneracy(n - 1, j - 1, self.face(n, i, k));
                                rep.check(lhs == rhs, Relation::FaceDegeneracyBelow, n, i, j, k);
                            } else {
                                let rhs = self.degeneracy(n - 1, j, self.face(n, i - 1, k));
                                rep.check(lhs == rhs, Relation::FaceDegeneracyAbove, n, i, j, k);
                            }
                        }
                    }
                }
                if n + 2 <= big_n {
                    for j in 0..=n {
                        for i in 0..=j {
                            let lhs = self.degeneracy(n + 1, i, self.degeneracy(n, j, k));
                            let rhs = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, k));
                            rep.check(lhs == rhs, Relation::DegeneracyDegeneracy, n, i, j, k);
                        }
                    }
                }
            }
        }
        rep
    }

    /// Degenerate means `s_{n-1,i}(d_{n,i} σ) = σ` for some `i < n`.
    pub fn is_degenerate(&self, s: SimplexRef) -> bool {
        self.degenerate_index(s.degree, s.index).is_some()
    }

    /// Smallest `i` with `s_i d_i σ = σ`.
    fn degenerate_index(&self, n: usize, k: usize) -> Option<usize> {
        (0..n).find(|&i| self.degeneracy(n - 1, i, self.face(n, i, k)) == k)
    }

    /// Positions of the non-degenerate simplices of degree `n`, ascending.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.count(n))
            .filter(|&k| self.degenerate_index(n, k).is_none())
            .collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.cutoff).map(|n| self.nondegenerate(n).len()).collect()
    }

    /// Eilenberg–Zilber normal form: strips the smallest applicable
    /// degeneracy until the base is non-degenerate, then rewrites the
    /// recorded string into strictly increasing order.
    pub fn ez_normal_form(&self, s: SimplexRef) -> EzForm {
        let (mut n, mut k) = (s.degree, s.index);
        let mut stripped = Vec::new();
        while let Some(i) = self.degenerate_index(n, k) {
            stripped.push(i);
            k = self.face(n, i, k);
            n -= 1;
        }
        // stripped[0] is the outermost degeneracy
        let indices = stripped.iter().rev().fold(Vec::new(), |acc, &i| apply_degeneracy(&acc, i));
        EzForm {
            indices,
            base: SimplexRef::new(n, k),
        }
    }

    /// Applies the degeneracy string of `ez` to its base using the tables.
    pub fn realize(&self, ez: &EzForm) -> Result<SimplexRef> {
        let target = ez.degree();
        if target > self.cutoff {
            return Err(Error::out_of_range("degeneracy string", target, self.cutoff));
        }
        let (mut n, mut k) = (ez.base.degree, ez.base.index);
        for &j in &ez.indices {
            if j > n {
                return Err(Error::invalid(format!("degeneracy index {j} too large in degree {n}")));
            }
            k = self.degeneracy(n, j, k);
            n += 1;
        }
        Ok(SimplexRef::new(n, k))
    }

    /// Drops every degree above `new_cutoff`.
    pub fn truncate(&self, new_cutoff: usize) -> Result<Self> {
        if new_cutoff > self.cutoff {
            return Err(Error::invalid(format!(
                "cannot truncate a {}-truncated set at {new_cutoff}",
                self.cutoff
            )));
        }
        if new_cutoff == self.cutoff {
            return Ok(self.clone());
        }
        Ok(TruncatedSimplicialSet {
            cutoff: new_cutoff,
            labels: self.labels[..=new_cutoff].to_vec(),
            faces: self.faces[..=new_cutoff].to_vec(),
            degeneracies: self.degeneracies[..new_cutoff].to_vec(),
            provenance: Provenance::Truncate {
                base: Box::new(self.provenance.clone()),
                from: self.cutoff,
            },
        })
    }
}

fn check_map(map: &[usize], len: usize, range: usize, name: impl Fn() -> String) -> Result<()> {
    if map.len() != len {
        return Err(Error::invalid(format!("{} has {} entries, expected {len}", name(), map.len())));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= range) {
        return Err(Error::invalid(format!("{} sends a simplex to {bad}, outside 0..{range}", name())));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
