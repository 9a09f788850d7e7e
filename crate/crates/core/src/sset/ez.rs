//! Degeneracy strings and the symbolic face/degeneracy calculus on
//! Eilenberg–Zilber forms.

use serde::Serialize;

use super::SimplexRef;

/// A simplex written as `s_{j_{k-1}} ⋯ s_{j_0} τ` with `j_0 < … < j_{k-1}`
/// and `τ` non-degenerate. `indices[0]` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EzForm {
    pub indices: Vec<usize>,
    pub base: SimplexRef,
}

impl EzForm {
    pub fn degree(&self) -> usize {
        self.base.degree + self.indices.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.indices.is_empty()
    }
}

/// Applies `s_i` on the outside of a canonical string and returns the
/// canonical string of the result.
///
/// Pushing `s_i` inward with `s_i s_j = s_{j+1} s_i` (`i ≤ j`) shifts every
/// index `≥ i` up by one and leaves `i` in between.
pub fn apply_degeneracy(indices: &[usize], i: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(indices.len() + 1);
    out.extend(indices.iter().copied().filter(|&j| j < i));
    out.push(i);
    out.extend(indices.iter().copied().filter(|&j| j >= i).map(|j| j + 1));
    out
}

/// Outcome of pushing a face operator through a degeneracy string.
pub(crate) enum FacePush {
    /// The face cancelled against a degeneracy; the simplex is `outer` applied
    /// (innermost first) on top of `inner` and the unchanged base.
    Cancelled { inner: Vec<usize>, outer: Vec<usize> },
    /// The face reached the base as `d_i`; `outer` is to be re-applied
    /// (innermost first) on top of the base's face.
    Reached { i: usize, outer: Vec<usize> },
}

/// Moves `d_i` through `s_{j_{k-1}} ⋯ s_{j_0}` from the outside in, using
/// `d_i s_j = s_{j-1} d_i` (`i<j`), `d_i s_j = id` (`i=j,j+1`) and
/// `d_i s_j = s_j d_{i-1}` (`i>j+1`).
pub(crate) fn push_face(indices: &[usize], mut i: usize) -> FacePush {
    let mut outer_rev = Vec::new();
    for t in (0..indices.len()).rev() {
        let j = indices[t];
        if i < j {
            outer_rev.push(j - 1);
        } else if i == j || i == j + 1 {
            outer_rev.reverse();
            return FacePush::Cancelled {
                inner: indices[..t].to_vec(),
                outer: outer_rev,
            };
        } else {
            outer_rev.push(j);
            i -= 1;
        }
    }
    outer_rev.reverse();
    FacePush::Reached { i, outer: outer_rev }
}

/// Canonical string of `outer` (innermost first) applied on top of `inner`.
pub(crate) fn compose_strings(inner: &[usize], outer: &[usize]) -> Vec<usize> {
    outer.iter().fold(inner.to_vec(), |acc, &j| apply_degeneracy(&acc, j))
}

/// Symbolic calculus on EZ forms over a fixed family of non-degenerate
/// cells, given the faces of each cell as EZ forms.
pub(crate) struct EzEngine {
    /// `cell_faces[k][c][i]` is `d_i` of cell `c` of degree `k ≥ 1`.
    pub cell_faces: Vec<Vec<Vec<EzForm>>>,
}

impl EzEngine {
    pub fn face(&self, ez: &EzForm, i: usize) -> EzForm {
        match push_face(&ez.indices, i) {
            FacePush::Cancelled { inner, outer } => EzForm {
                indices: compose_strings(&inner, &outer),
                base: ez.base,
            },
            FacePush::Reached { i, outer } => {
                let f = &self.cell_faces[ez.base.degree][ez.base.index][i];
                EzForm {
                    indices: compose_strings(&f.indices, &outer),
                    base: f.base,
                }
            }
        }
    }

    pub fn degeneracy(&self, ez: &EzForm, i: usize) -> EzForm {
        EzForm {
            indices: apply_degeneracy(&ez.indices, i),
            base: ez.base,
        }
    }
}

/// All strictly increasing strings of length `len` with entries below `bound`.
pub(crate) fn increasing_strings(bound: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, bound: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for j in start..bound {
            if bound - j < len - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, bound, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, bound, len, &mut Vec::new(), &mut out);
    out
}
