//! Constructors for the standard families of simplicial sets.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use super::ez::{increasing_strings, EzEngine, EzForm};
use super::{FiniteCategoryTable, FiniteGroupTable, Provenance, SimplexRef, TruncatedSimplicialSet};
use crate::error::{Error, Result};

/// Builds index tables from per-degree key lists and symbolic face and
/// degeneracy maps on keys.
fn assemble<K: Eq + Hash + Clone>(
    keys: Vec<Vec<K>>,
    label: impl Fn(usize, &K) -> String,
    face: impl Fn(usize, usize, &K) -> K,
    degeneracy: impl Fn(usize, usize, &K) -> K,
    provenance: Provenance,
) -> Result<TruncatedSimplicialSet> {
    let cutoff = keys.len() - 1;
    let positions: Vec<HashMap<&K, usize>> = keys
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(p, k)| (k, p)).collect())
        .collect();
    let lookup = |n: usize, k: &K, what: &str| -> Result<usize> {
        positions[n]
            .get(k)
            .copied()
            .ok_or_else(|| Error::invariant(format!("{what} leaves the simplex list of degree {n}")))
    };
    let labels = keys
        .iter()
        .enumerate()
        .map(|(n, ks)| ks.iter().map(|k| label(n, k)).collect())
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=cutoff {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                keys[n]
                    .iter()
                    .map(|k| lookup(n - 1, &face(n, i, k), "a face"))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        faces.push(per_i);
    }
    let mut degeneracies = Vec::new();
    for n in 0..cutoff {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                keys[n]
                    .iter()
                    .map(|k| lookup(n + 1, &degeneracy(n, i, k), "a degeneracy"))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        degeneracies.push(per_i);
    }
    TruncatedSimplicialSet::from_tables(labels, faces, degeneracies, provenance)
}

/// The discrete simplicial set on `set_size` points: every map is the identity.
pub fn build_discrete(set_size: usize, cutoff: usize) -> Result<TruncatedSimplicialSet> {
    if set_size == 0 {
        return Err(Error::invalid("discrete simplicial set needs set_size >= 1"));
    }
    let keys = vec![(0..set_size).collect::<Vec<_>>(); cutoff + 1];
    assemble(
        keys,
        |_, &k| k.to_string(),
        |_, _, &k| k,
        |_, _, &k| k,
        Provenance::Discrete { set_size },
    )
}

/// The discrete simplicial set on the elements of a group, labelled by them.
pub fn build_discrete_group(group: &FiniteGroupTable, cutoff: usize) -> Result<TruncatedSimplicialSet> {
    let keys = vec![(0..group.order()).collect::<Vec<_>>(); cutoff + 1];
    assemble(
        keys,
        |_, &k| group.labels()[k].clone(),
        |_, _, &k| k,
        |_, _, &k| k,
        Provenance::DiscreteGroup { group: group.clone() },
    )
}

/// The nerve of a finite category.
///
/// Degree 0 holds the objects; degree `n ≥ 1` holds composable strings
/// `(f_1, …, f_n)` with `target(f_k) = source(f_{k+1})`, ordered
/// lexicographically by morphism position. `d_0` drops `f_1`, `d_n` drops
/// `f_n`, interior faces compose neighbours and `s_i` inserts an identity.
pub fn build_nerve(cat: &FiniteCategoryTable, cutoff: usize) -> Result<TruncatedSimplicialSet> {
    nerve_with(
        cat,
        cutoff,
        Provenance::NerveCategory {
            objects: cat.objects().len(),
            morphisms: cat.morphisms().len(),
        },
    )
}

/// The nerve of the one-object category of a finite group.
pub fn build_nerve_group(group: &FiniteGroupTable, cutoff: usize) -> Result<TruncatedSimplicialSet> {
    nerve_with(&group.delooping(), cutoff, Provenance::NerveGroup { group: group.clone() })
}

fn nerve_with(cat: &FiniteCategoryTable, cutoff: usize, provenance: Provenance) -> Result<TruncatedSimplicialSet> {
    let nmor = cat.morphisms().len();
    let mut keys: Vec<Vec<Vec<usize>>> = vec![(0..cat.objects().len()).map(|x| vec![x]).collect()];
    if cutoff >= 1 {
        keys.push((0..nmor).map(|f| vec![f]).collect());
    }
    for _ in 2..=cutoff {
        let prev = keys.last().expect("degree 1 present");
        let next = prev
            .iter()
            .flat_map(|s| {
                let t = cat.target(*s.last().expect("nonempty string"));
                (0..nmor).filter(move |&g| cat.source(g) == t).map(move |g| {
                    let mut e = s.clone();
                    e.push(g);
                    e
                })
            })
            .collect();
        keys.push(next);
    }
    let label = |n: usize, k: &Vec<usize>| {
        if n == 0 {
            cat.objects()[k[0]].clone()
        } else {
            let names: Vec<&str> = k.iter().map(|&f| cat.morphisms()[f].name.as_str()).collect();
            format!("({})", names.join(","))
        }
    };
    let face = |n: usize, i: usize, k: &Vec<usize>| -> Vec<usize> {
        if n == 1 {
            // d_0 f = target, d_1 f = source
            return vec![if i == 0 { cat.target(k[0]) } else { cat.source(k[0]) }];
        }
        let mut out = k.clone();
        if i == 0 {
            out.remove(0);
        } else if i == n {
            out.pop();
        } else {
            let c = cat.compose(k[i - 1], k[i]).expect("nerve strings are composable");
            out.splice(i - 1..=i, [c]);
        }
        out
    };
    let degeneracy = |n: usize, i: usize, k: &Vec<usize>| -> Vec<usize> {
        if n == 0 {
            return vec![cat.identity(k[0])];
        }
        let object = if i == 0 { cat.source(k[0]) } else { cat.target(k[i - 1]) };
        let mut out = k.clone();
        out.insert(i, cat.identity(object));
        out
    };
    assemble(keys, label, face, degeneracy, provenance)
}

/// An abstract simplicial complex on ordered vertices `0 < 1 < … < d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedComplexTable {
    vertex_count: usize,
    simplices: Vec<Vec<usize>>,
}

impl OrderedComplexTable {
    /// Checks that the family is downward closed and contains every vertex.
    /// Each simplex is given as a set of vertices; order inside is ignored.
    pub fn new(vertex_count: usize, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::invalid("complex needs at least one vertex"));
        }
        let mut family = HashSet::new();
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::invalid("complex simplices must be non-empty"));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::invalid(format!("vertex {v} outside 0..{vertex_count}")));
            }
            family.insert(s);
        }
        for v in 0..vertex_count {
            if !family.contains(&vec![v]) {
                return Err(Error::invalid(format!("complex is missing the vertex {{{v}}}")));
            }
        }
        for s in &family {
            if s.len() < 2 {
                continue;
            }
            for drop in 0..s.len() {
                let mut f = s.clone();
                f.remove(drop);
                if !family.contains(&f) {
                    return Err(Error::invalid(format!(
                        "family is not downward closed: {s:?} lacks the face {f:?}"
                    )));
                }
            }
        }
        let mut simplices: Vec<Vec<usize>> = family.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(OrderedComplexTable {
            vertex_count,
            simplices,
        })
    }

    /// Downward closure of the given facets.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all = HashSet::new();
        for v in 0..vertex_count {
            all.insert(vec![v]);
        }
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            for mask in 1u64..(1u64 << f.len()) {
                let sub: Vec<usize> = (0..f.len()).filter(|&b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                all.insert(sub);
            }
        }
        Self::new(vertex_count, all.into_iter().collect())
    }

    /// The full simplex on `vertex_count` vertices.
    pub fn full(vertex_count: usize) -> Result<Self> {
        Self::from_facets(vertex_count, &[(0..vertex_count).collect()])
    }

    /// All proper faces of the full simplex: a sphere of dimension `vertex_count - 2`.
    pub fn boundary(vertex_count: usize) -> Result<Self> {
        let facets: Vec<Vec<usize>> = (0..vertex_count)
            .map(|drop| (0..vertex_count).filter(|&v| v != drop).collect())
            .collect();
        Self::from_facets(vertex_count, &facets)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Simplices sorted by size, then lexicographically.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.binary_search_by(|t| t.len().cmp(&s.len()).then(t.as_slice().cmp(s))).is_ok()
    }
}

/// The simplicial set of a complex: degree-`n` simplices are non-decreasing
/// vertex sequences of length `n+1` whose support is a simplex. `d_i`
/// deletes position `i`, `s_i` repeats it.
pub fn build_from_complex(cx: &OrderedComplexTable, cutoff: usize) -> Result<TruncatedSimplicialSet> {
    let family: HashSet<&[usize]> = cx.simplices().iter().map(Vec::as_slice).collect();
    let mut keys: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut support = Vec::new();
        extend_sequences(cx.vertex_count(), n + 1, &family, &mut cur, &mut support, &mut out);
        keys.push(out);
    }
    let label = |_: usize, k: &Vec<usize>| {
        let parts: Vec<String> = k.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    };
    assemble(
        keys,
        label,
        |_, i, k| {
            let mut out = k.clone();
            out.remove(i);
            out
        },
        |_, i, k| {
            let mut out = k.clone();
            out.insert(i, k[i]);
            out
        },
        Provenance::OrderedComplex {
            vertex_count: cx.vertex_count(),
            simplices: cx.simplices().len(),
        },
    )
}

fn extend_sequences(
    nvert: usize,
    len: usize,
    family: &HashSet<&[usize]>,
    cur: &mut Vec<usize>,
    support: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().copied().unwrap_or(0);
    for v in start..nvert {
        let fresh = support.last() != Some(&v);
        if fresh {
            support.push(v);
            if !family.contains(support.as_slice()) {
                support.pop();
                continue;
            }
        }
        cur.push(v);
        extend_sequences(nvert, len, family, cur, support, out);
        cur.pop();
        if fresh {
            support.pop();
        }
    }
}

/// A non-degenerate simplex of a [`build_from_cells`] presentation: its label
/// and its faces written as EZ forms over cells of one degree lower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub faces: Vec<EzForm>,
}

impl Cell {
    pub fn vertex(label: impl Into<String>) -> Self {
        Cell {
            label: label.into(),
            faces: Vec::new(),
        }
    }
}

/// Builds the simplicial set freely generated by the given non-degenerate
/// cells: degree `n` holds every EZ form over a cell of degree `k ≤ n`.
///
/// In each degree the cells come first, in the given order, followed by the
/// degenerate simplices ordered by descending base degree, base position,
/// then degeneracy string. Degenerate labels read `s[j0,j1,…](base)`.
pub fn build_from_cells(cutoff: usize, cells: Vec<Vec<Cell>>) -> Result<TruncatedSimplicialSet> {
    if cells.first().map_or(true, Vec::is_empty) {
        return Err(Error::invalid("cell presentation needs at least one vertex"));
    }
    if cells.len() > cutoff + 1 {
        return Err(Error::invalid("cells above the cutoff"));
    }
    let mut cell_faces: Vec<Vec<Vec<EzForm>>> = Vec::with_capacity(cells.len());
    for (k, row) in cells.iter().enumerate() {
        let mut faces_k = Vec::with_capacity(row.len());
        for cell in row {
            let expected = if k == 0 { 0 } else { k + 1 };
            if cell.faces.len() != expected {
                return Err(Error::invalid(format!(
                    "cell {} of degree {k} needs {expected} faces",
                    cell.label
                )));
            }
            for f in &cell.faces {
                let b = f.base;
                let ok = f.degree() + 1 == k
                    && b.degree < cells.len()
                    && b.index < cells[b.degree].len()
                    && f.indices.windows(2).all(|w| w[0] < w[1])
                    && f.indices.iter().enumerate().all(|(t, &j)| j <= b.degree + t);
                if !ok {
                    return Err(Error::invalid(format!("cell {} has a malformed face {f:?}", cell.label)));
                }
            }
            faces_k.push(cell.faces.clone());
        }
        cell_faces.push(faces_k);
    }
    let engine = EzEngine { cell_faces };
    let keys: Vec<Vec<EzForm>> = (0..=cutoff).map(|n| ez_keys(n, &cells.iter().map(Vec::len).collect::<Vec<_>>())).collect();
    let label = |_: usize, k: &EzForm| {
        let base = &cells[k.base.degree][k.base.index].label;
        ez_label(&k.indices, base)
    };
    assemble(
        keys,
        label,
        |_, i, k| engine.face(k, i),
        |_, i, k| engine.degeneracy(k, i),
        Provenance::Cells,
    )
}

/// All EZ forms of degree `n` over `cell_counts[k]` cells in each degree `k`,
/// in the canonical order described at [`build_from_cells`].
pub(crate) fn ez_keys(n: usize, cell_counts: &[usize]) -> Vec<EzForm> {
    let mut out = Vec::new();
    for k in (0..=n.min(cell_counts.len().saturating_sub(1))).rev() {
        let strings = increasing_strings(n, n - k);
        for c in 0..cell_counts[k] {
            for s in &strings {
                out.push(EzForm {
                    indices: s.clone(),
                    base: SimplexRef::new(k, c),
                });
            }
        }
    }
    out
}

pub(crate) fn ez_label(indices: &[usize], base: &str) -> String {
    if indices.is_empty() {
        base.to_string()
    } else {
        let parts: Vec<String> = indices.iter().map(usize::to_string).collect();
        format!("s[{}]({base})", parts.join(","))
    }
}

/// Degreewise Cartesian product with componentwise maps.
///
/// Pairs are ordered lexicographically by position, so `(a, b)` sits at
/// `a·|Y_n| + b`. Labels of nested products are flattened, which makes the
/// product strictly associative on labels.
pub fn product(x: &TruncatedSimplicialSet, y: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    if x.cutoff() != y.cutoff() {
        return Err(Error::invalid(format!(
            "product needs equal cutoffs, got {} and {}",
            x.cutoff(),
            y.cutoff()
        )));
    }
    let inner = |s: &TruncatedSimplicialSet, l: &str| -> String {
        if matches!(s.provenance(), Provenance::Product { .. }) {
            l[1..l.len() - 1].to_string()
        } else {
            l.to_string()
        }
    };
    let big_n = x.cutoff();
    let labels = (0..=big_n)
        .map(|n| {
            let ly: Vec<String> = y.labels(n).iter().map(|l| inner(y, l)).collect();
            x.labels(n)
                .iter()
                .flat_map(|a| {
                    let a = inner(x, a);
                    ly.iter().map(move |b| format!("({a},{b})"))
                })
                .collect()
        })
        .collect();
    let pair_map = |fx: &[usize], fy: &[usize], ny: usize| -> Vec<usize> {
        fx.iter()
            .flat_map(|&a| fy.iter().map(move |&b| a * ny + b))
            .collect()
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=big_n {
        faces.push(
            (0..=n)
                .map(|i| pair_map(x.face_map(n, i), y.face_map(n, i), y.count(n - 1)))
                .collect(),
        );
    }
    let degeneracies = (0..big_n)
        .map(|n| {
            (0..=n)
                .map(|i| pair_map(x.degeneracy_map(n, i), y.degeneracy_map(n, i), y.count(n + 1)))
                .collect()
        })
        .collect();
    let mut factors = Vec::new();
    for s in [x, y] {
        match s.provenance() {
            Provenance::Product { factors: f } => factors.extend(f.iter().cloned()),
            p => factors.push(p.clone()),
        }
    }
    TruncatedSimplicialSet::from_tables(labels, faces, degeneracies, Provenance::Product { factors })
}

/// Degreewise disjoint union: all of `X` first, then all of `Y`.
///
/// Labels are prefixed with the summand number (`0:`, `1:`, …); nested
/// unions are renumbered so the prefixes count summands left to right.
pub fn disjoint_union(x: &TruncatedSimplicialSet, y: &TruncatedSimplicialSet) -> Result<TruncatedSimplicialSet> {
    if x.cutoff() != y.cutoff() {
        return Err(Error::invalid(format!(
            "disjoint union needs equal cutoffs, got {} and {}",
            x.cutoff(),
            y.cutoff()
        )));
    }
    let summands_of = |s: &TruncatedSimplicialSet| -> Vec<Provenance> {
        match s.provenance() {
            Provenance::DisjointUnion { summands } => summands.clone(),
            p => vec![p.clone()],
        }
    };
    let (sx, sy) = (summands_of(x), summands_of(y));
    let relabel = |s: &TruncatedSimplicialSet, l: &str, offset: usize| -> String {
        if matches!(s.provenance(), Provenance::DisjointUnion { .. }) {
            let (k, rest) = l.split_once(':').expect("union labels carry a prefix");
            let k: usize = k.parse().expect("numeric summand prefix");
            format!("{}:{rest}", k + offset)
        } else {
            format!("{offset}:{l}")
        }
    };
    let big_n = x.cutoff();
    let labels = (0..=big_n)
        .map(|n| {
            x.labels(n)
                .iter()
                .map(|l| relabel(x, l, 0))
                .chain(y.labels(n).iter().map(|l| relabel(y, l, sx.len())))
                .collect()
        })
        .collect();
    let join = |fx: &[usize], fy: &[usize], offset: usize| -> Vec<usize> {
        fx.iter().copied().chain(fy.iter().map(|&b| b + offset)).collect()
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=big_n {
        faces.push(
            (0..=n)
                .map(|i| join(x.face_map(n, i), y.face_map(n, i), x.count(n - 1)))
                .collect(),
        );
    }
    let degeneracies = (0..big_n)
        .map(|n| {
            (0..=n)
                .map(|i| join(x.degeneracy_map(n, i), y.degeneracy_map(n, i), x.count(n + 1)))
                .collect()
        })
        .collect();
    let summands = sx.into_iter().chain(sy).collect();
    TruncatedSimplicialSet::from_tables(labels, faces, degeneracies, Provenance::DisjointUnion { summands })
}
