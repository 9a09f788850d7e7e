use std::collections::HashMap;

use super::builders::{ez_keys, ez_label};
use super::ez::{EzEngine, EzForm};
use super::{Provenance, SimplexRef, TruncatedSimplicialSet};
use crate::error::{Error, Result};

/// The `M`-truncation of the `N`-skeleton of `X`.
///
/// Degrees `≤ N` are copied unchanged. Each degree `m > N` consists of the
/// EZ forms over the non-degenerate simplices of `X`, and maps that cross
/// above `N` are computed symbolically on those forms. Behaviour is only
/// constructed, and therefore only verified, up to `M`.
pub fn skeleton_extend(x: &TruncatedSimplicialSet, m: usize) -> Result<TruncatedSimplicialSet> {
    let big_n = x.cutoff();
    if m <= big_n {
        return Err(Error::invalid(format!("skeleton_extend needs M > N, got M={m}, N={big_n}")));
    }
    x.validate().into_result()?;

    // non-degenerate simplices of X become the cells, numbered by rank
    let nondeg: Vec<Vec<usize>> = (0..=big_n).map(|n| x.nondegenerate(n)).collect();
    let mut cell_of: Vec<HashMap<usize, usize>> = Vec::with_capacity(big_n + 1);
    for ks in &nondeg {
        cell_of.push(ks.iter().enumerate().map(|(c, &k)| (k, c)).collect());
    }
    let to_cells = |ez: EzForm| -> EzForm {
        let b = ez.base;
        EzForm {
            indices: ez.indices,
            base: SimplexRef::new(b.degree, cell_of[b.degree][&b.index]),
        }
    };
    let cell_faces: Vec<Vec<Vec<EzForm>>> = (0..=big_n)
        .map(|k| {
            nondeg[k]
                .iter()
                .map(|&s| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..=k)
                        .map(|i| to_cells(x.ez_normal_form(SimplexRef::new(k - 1, x.face(k, i, s)))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let engine = EzEngine { cell_faces };
    let counts: Vec<usize> = nondeg.iter().map(Vec::len).collect();

    // EZ keys for every degree; stored degrees map keys back to X positions
    let stored_keys: Vec<Vec<EzForm>> = (0..=big_n)
        .map(|n| (0..x.count(n)).map(|k| to_cells(x.ez_normal_form(SimplexRef::new(n, k)))).collect())
        .collect();
    let new_keys: Vec<Vec<EzForm>> = (big_n + 1..=m).map(|n| ez_keys(n, &counts)).collect();
    let all_keys: Vec<&Vec<EzForm>> = stored_keys.iter().chain(new_keys.iter()).collect();
    let positions: Vec<HashMap<&EzForm, usize>> = all_keys
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(p, k)| (k, p)).collect())
        .collect();
    let lookup = |n: usize, k: &EzForm| -> Result<usize> {
        positions[n]
            .get(k)
            .copied()
            .ok_or_else(|| Error::invariant(format!("symbolic map left degree {n}: {k:?}")))
    };

    let mut labels: Vec<Vec<String>> = (0..=big_n).map(|n| x.labels(n).to_vec()).collect();
    for keys in &new_keys {
        labels.push(
            keys.iter()
                .map(|k| ez_label(&k.indices, x.label(SimplexRef::new(k.base.degree, nondeg[k.base.degree][k.base.index]))))
                .collect(),
        );
    }
    let mut faces: Vec<Vec<Vec<usize>>> = (0..=big_n)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| x.face_map(n, i).to_vec()).collect() })
        .collect();
    for n in big_n + 1..=m {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                all_keys[n]
                    .iter()
                    .map(|k| lookup(n - 1, &engine.face(k, i)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        faces.push(per_i);
    }
    let mut degeneracies: Vec<Vec<Vec<usize>>> = (0..big_n)
        .map(|n| (0..=n).map(|i| x.degeneracy_map(n, i).to_vec()).collect())
        .collect();
    for n in big_n..m {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                all_keys[n]
                    .iter()
                    .map(|k| lookup(n + 1, &engine.degeneracy(k, i)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        degeneracies.push(per_i);
    }
    TruncatedSimplicialSet::from_tables(
        labels,
        faces,
        degeneracies,
        Provenance::SkeletonExtend {
            base: Box::new(x.provenance().clone()),
            from: big_n,
        },
    )
}
