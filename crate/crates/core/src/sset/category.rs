//! Finite categories and finite groups given by explicit tables.

use serde::Serialize;

use crate::error::{Error, Result};

/// A morphism of a [`FiniteCategoryTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismEntry {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category with a dense composition table.
///
/// `compose(f, g)` is the composite "first `f`, then `g`", written `g∘f`
/// in the usual notation; it is defined exactly when `target(f) == source(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCategoryTable {
    objects: Vec<String>,
    morphisms: Vec<MorphismEntry>,
    #[serde(skip)]
    compose: Vec<Vec<Option<usize>>>,
    identities: Vec<usize>,
}

impl FiniteCategoryTable {
    /// Builds and checks a category. `composites` lists `(f, g, g∘f)`.
    ///
    /// Every failure names the violated law.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<MorphismEntry>,
        composites: &[(usize, usize, usize)],
        identities: Vec<usize>,
    ) -> Result<Self> {
        let nobj = objects.len();
        let nmor = morphisms.len();
        if nobj == 0 {
            return Err(Error::invalid("category has no objects"));
        }
        let mut names = std::collections::HashSet::new();
        for m in &morphisms {
            if m.source >= nobj || m.target >= nobj {
                return Err(Error::invalid(format!("morphism {} has an unknown endpoint", m.name)));
            }
            if !names.insert(m.name.as_str()) {
                return Err(Error::invalid(format!("duplicate morphism name {}", m.name)));
            }
        }
        if identities.len() != nobj {
            return Err(Error::invalid("identity table must list one morphism per object"));
        }
        for (x, &id) in identities.iter().enumerate() {
            let m = morphisms
                .get(id)
                .ok_or_else(|| Error::invalid(format!("identity of object {} is not a morphism", objects[x])))?;
            if m.source != x || m.target != x {
                return Err(Error::invalid(format!(
                    "identity law: {} is not an endomorphism of {}",
                    m.name, objects[x]
                )));
            }
        }
        let mut compose = vec![vec![None; nmor]; nmor];
        for &(f, g, h) in composites {
            if f >= nmor || g >= nmor || h >= nmor {
                return Err(Error::invalid("composition table refers to an unknown morphism"));
            }
            if morphisms[f].target != morphisms[g].source {
                return Err(Error::invalid(format!(
                    "composition domain: {} then {} is not a composable pair",
                    morphisms[f].name, morphisms[g].name
                )));
            }
            if compose[f][g].is_some_and(|prev| prev != h) {
                return Err(Error::invalid(format!(
                    "composition table lists {} then {} twice with different results",
                    morphisms[f].name, morphisms[g].name
                )));
            }
            compose[f][g] = Some(h);
        }
        let cat = FiniteCategoryTable {
            objects,
            morphisms,
            compose,
            identities,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        let name = |f: usize| self.morphisms[f].name.as_str();
        let n = self.morphisms.len();
        for f in 0..n {
            for g in 0..n {
                let composable = self.morphisms[f].target == self.morphisms[g].source;
                match (composable, self.compose[f][g]) {
                    (true, None) => {
                        return Err(Error::invalid(format!(
                            "composition domain: composite of {} then {} is missing",
                            name(f),
                            name(g)
                        )))
                    }
                    (true, Some(h)) => {
                        let mh = &self.morphisms[h];
                        if mh.source != self.morphisms[f].source || mh.target != self.morphisms[g].target {
                            return Err(Error::invalid(format!(
                                "composition typing: {} then {} gives {} with wrong endpoints",
                                name(f),
                                name(g),
                                name(h)
                            )));
                        }
                    }
                    _ => {}
                }
            }
        }
        for f in 0..n {
            let (s, t) = (self.morphisms[f].source, self.morphisms[f].target);
            if self.compose[self.identities[s]][f] != Some(f) || self.compose[f][self.identities[t]] != Some(f) {
                return Err(Error::invalid(format!("unit law fails at {}", name(f))));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = self.compose[f][g] else { continue };
                for h in 0..n {
                    let Some(gh) = self.compose[g][h] else { continue };
                    if self.compose[fg][h] != self.compose[f][gh] {
                        return Err(Error::invalid(format!(
                            "associativity fails at ({}, {}, {})",
                            name(f),
                            name(g),
                            name(h)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The category of a finite total order `0 < 1 < … < k-1`: one morphism
    /// `i→j` for each `i ≤ j`.
    pub fn linear_order(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("linear order needs at least one object"));
        }
        let objects = (0..k).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = vec![vec![usize::MAX; k]; k];
        for i in 0..k {
            for j in i..k {
                index[i][j] = morphisms.len();
                morphisms.push(MorphismEntry {
                    name: format!("{i}<={j}"),
                    source: i,
                    target: j,
                });
            }
        }
        let mut composites = Vec::new();
        for i in 0..k {
            for j in i..k {
                for l in j..k {
                    composites.push((index[i][j], index[j][l], index[i][l]));
                }
            }
        }
        let identities = (0..k).map(|i| index[i][i]).collect();
        Self::new(objects, morphisms, &composites, identities)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorphismEntry] {
        &self.morphisms
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    /// `g∘f`, or `None` when the pair is not composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f][g]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    /// Every morphism has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms.len()).all(|f| {
            (0..self.morphisms.len()).any(|g| {
                self.compose[f][g] == Some(self.identity(self.source(f)))
                    && self.compose[g][f] == Some(self.identity(self.target(f)))
            })
        })
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    #[serde(skip)]
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("group must have at least one element"));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::invalid(format!("group table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::invalid("closure: group table entry out of range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::invalid("identity: no two-sided identity element"))?;
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::invalid(format!("inverse: element {} has no inverse", labels[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !labels.iter().all(|l| seen.insert(l)) {
            return Err(Error::invalid("duplicate group element label"));
        }
        Ok(FiniteGroupTable {
            labels,
            table,
            identity,
            inverses,
        })
    }

    /// ℤ/n with elements labelled `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group order must be positive"));
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(labels, table)
    }

    /// Symmetric group on `k` letters; elements are permutations in one-line
    /// notation, ordered lexicographically, composed left to right
    /// (`(p·q)(x) = q(p(x))`).
    pub fn symmetric(k: usize) -> Result<Self> {
        if k == 0 || k > 5 {
            return Err(Error::invalid("symmetric group supported for 1..=5 letters"));
        }
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &perms {
                for x in (0..k).filter(|x| !p.contains(x)) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = (0..k).map(|x| q[p[x]]).collect();
                        perms.iter().position(|r| *r == pq).expect("closed under composition")
                    })
                    .collect()
            })
            .collect();
        Self::new(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// The one-object category whose morphisms are the group elements.
    ///
    /// Composition follows the left-to-right product: "first `g`, then `h`"
    /// is `g·h`, so the nerve face `d_i` merges `(g_i, g_{i+1})` into `g_i·g_{i+1}`.
    pub fn delooping(&self) -> FiniteCategoryTable {
        let n = self.order();
        let morphisms = self
            .labels
            .iter()
            .map(|l| MorphismEntry {
                name: l.clone(),
                source: 0,
                target: 0,
            })
            .collect();
        let composites: Vec<_> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (a, b, self.table[a][b]))
            .collect();
        FiniteCategoryTable::new(vec!["*".to_string()], morphisms, &composites, vec![self.identity])
            .expect("a group deloops to a valid category")
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroupTable, map: &[usize]) -> bool {
        let n = self.order();
        map.len() == n
            && map.iter().all(|&v| v < target.order())
            && (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }
}
