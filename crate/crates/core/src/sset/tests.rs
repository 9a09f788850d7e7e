use proptest::prelude::*;

use super::*;
use crate::fixtures;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// |X_n| = Σ_m binom(n, m)·|nondeg_m|.
fn recombined(nondeg: &[usize], n: usize) -> usize {
    (0..=n.min(nondeg.len() - 1)).map(|m| binom(n, m) * nondeg[m]).sum()
}

fn all_fixtures() -> Vec<(&'static str, TruncatedSimplicialSet)> {
    fixtures::catalogue()
}

#[test]
fn builders_satisfy_all_relations() {
    for (name, x) in all_fixtures() {
        let rep = x.validate();
        assert!(rep.is_valid(), "{name}: {:?}", &rep.violations[..rep.violations.len().min(3)]);
        assert!(rep.checked > 0 || x.cutoff() == 0, "{name}");
    }
}

#[test]
fn discrete_sets_have_identity_maps() {
    let x = build_discrete(3, 2).unwrap();
    assert_eq!(x.counts(), vec![3, 3, 3]);
    for n in 1..=2 {
        for i in 0..=n {
            assert_eq!(x.face_map(n, i), &[0, 1, 2]);
        }
    }
    let y = build_discrete(2, 2).unwrap();
    assert!((0..2).all(|k| y.is_degenerate(SimplexRef::new(1, k))));
    assert_eq!(fixtures::point(3).counts(), vec![1, 1, 1, 1]);
    assert!(build_discrete(0, 1).is_err());
}

#[test]
fn nerve_counts_and_middle_face() {
    let trivial = build_nerve_group(&FiniteGroupTable::cyclic(1).unwrap(), 3).unwrap();
    assert_eq!(trivial.counts(), vec![1, 1, 1, 1]);
    let z2 = fixtures::cyclic_nerve(2, 3);
    assert_eq!(z2.counts(), vec![1, 2, 4, 8]);
    assert_eq!(z2.nondegenerate_counts(), vec![1, 1, 1, 1]);

    // Z_3, degree 2: d_1 merges the two entries into their product
    let z3 = fixtures::cyclic_nerve(3, 2);
    for g in 0..3 {
        for h in 0..3 {
            let k = z3.find(2, &format!("({g},{h})")).unwrap();
            let merged = z3.face(2, 1, k);
            assert_eq!(z3.labels(1)[merged], format!("({})", (g + h) % 3));
            assert_eq!(z3.labels(1)[z3.face(2, 0, k)], format!("({h})"));
            assert_eq!(z3.labels(1)[z3.face(2, 2, k)], format!("({g})"));
        }
    }
}

#[test]
fn nerve_middle_face_uses_left_to_right_product() {
    let s3 = FiniteGroupTable::symmetric(3).unwrap();
    let x = build_nerve_group(&s3, 2).unwrap();
    for g in 0..6 {
        for h in 0..6 {
            let k = g * 6 + h;
            assert_eq!(x.face(2, 1, k), s3.mul(g, h));
        }
    }
}

#[test]
fn complex_counts() {
    let tri = fixtures::full_simplex(2, 1);
    assert_eq!(tri.count(1), 6);
    assert_eq!(tri.count(1), binom(4, 2));
    let vertex = fixtures::full_simplex(0, 2);
    assert_eq!(vertex.counts(), vec![1, 1, 1]);

    // non-decreasing length-4 sequences on 4 vertices, minus the one using all four
    let sphere = fixtures::simplex_boundary(3, 3);
    let brute = (0..4usize.pow(4))
        .map(|c| [c / 64, c / 16 % 4, c / 4 % 4, c % 4])
        .filter(|s| s.windows(2).all(|w| w[0] <= w[1]))
        .filter(|s| !(s[0] == 0 && s[1] == 1 && s[2] == 2 && s[3] == 3))
        .count();
    assert_eq!(sphere.count(3), brute);
    assert_eq!(sphere.nondegenerate_counts(), vec![4, 6, 4, 0]);
    assert_eq!(sphere.count(3), recombined(&[4, 6, 4, 0], 3));
}

#[test]
fn complex_rejects_missing_faces() {
    assert!(OrderedComplexTable::new(3, vec![vec![0], vec![1], vec![2], vec![0, 1, 2]]).is_err());
    assert!(OrderedComplexTable::new(2, vec![vec![0]]).is_err());
}

#[test]
fn products_and_unions() {
    let x = fixtures::torus(2);
    let p = product(&fixtures::point(2), &x).unwrap();
    assert_eq!(p.counts(), x.counts());
    let z2 = fixtures::cyclic_nerve(2, 2);
    let zz = product(&z2, &z2).unwrap();
    assert_eq!(zz.count(2), 16);
    assert!(zz.validate().is_valid());
    let u = disjoint_union(&x, &z2).unwrap();
    for n in 0..=2 {
        assert_eq!(u.count(n), x.count(n) + z2.count(n));
    }
    assert!(u.validate().is_valid());
    assert!(product(&fixtures::point(1), &fixtures::point(2)).is_err());
}

#[test]
fn nested_products_flatten_labels() {
    let z2 = fixtures::cyclic_nerve(2, 1);
    let left = product(&product(&z2, &z2).unwrap(), &z2).unwrap();
    let right = product(&z2, &product(&z2, &z2).unwrap()).unwrap();
    assert_eq!(left.labels(1), right.labels(1));
    assert_eq!(left.labels(0), &["(*,*,*)".to_string()]);
    let u1 = disjoint_union(&disjoint_union(&z2, &z2).unwrap(), &z2).unwrap();
    let u2 = disjoint_union(&z2, &disjoint_union(&z2, &z2).unwrap()).unwrap();
    assert_eq!(u1.labels(1), u2.labels(1));
}

#[test]
fn swapped_faces_violate_face_face_relation() {
    let x = fixtures::full_simplex(2, 2);
    let mut broken = x.clone();
    // swap d_0 and d_1 on the edge (0,1)
    let e = x.find(1, "(0,1)").unwrap();
    let (f0, f1) = (x.face(1, 0, e), x.face(1, 1, e));
    broken.faces[1][0][e] = f1;
    broken.faces[1][1][e] = f0;
    let rep = broken.validate();
    assert!(rep.violations.iter().any(|v| v.relation == Relation::FaceFace && v.n == 2));
    assert!(broken.validate().into_result().unwrap_err().to_string().contains("simplicial relation"));
}

#[test]
fn faces_undo_degeneracies_everywhere() {
    for (name, x) in all_fixtures() {
        for n in 0..x.cutoff() {
            for j in 0..=n {
                for k in 0..x.count(n) {
                    let s = x.degeneracy(n, j, k);
                    assert_eq!(x.face(n + 1, j, s), k, "{name}");
                    assert_eq!(x.face(n + 1, j + 1, s), k, "{name}");
                }
            }
        }
    }
}

#[test]
fn degeneracy_examples() {
    let z2 = fixtures::cyclic_nerve(2, 2);
    for k in 0..z2.count(0) {
        assert!(!z2.is_degenerate(SimplexRef::new(0, k)));
    }
    let ge = z2.find(2, "(1,0)").unwrap();
    assert!(z2.is_degenerate(SimplexRef::new(2, ge)));
    assert!(!z2.is_degenerate(SimplexRef::new(2, z2.find(2, "(1,1)").unwrap())));
    let k = fixtures::full_simplex(2, 2);
    assert!(k.is_degenerate(SimplexRef::new(2, k.find(2, "(0,0,1)").unwrap())));
    assert!(!k.is_degenerate(SimplexRef::new(2, k.find(2, "(0,1,2)").unwrap())));
}

#[test]
fn nerve_degeneracy_means_an_identity_entry() {
    let x = fixtures::poset_nerve(3);
    let cat = FiniteCategoryTable::linear_order(3).unwrap();
    for n in 1..=3 {
        for (k, label) in x.labels(n).iter().enumerate() {
            let has_identity = label
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .any(|name| {
                    let f = cat.morphisms().iter().position(|m| m.name == name).unwrap();
                    cat.is_identity(f)
                });
            assert_eq!(x.is_degenerate(SimplexRef::new(n, k)), has_identity, "{label}");
        }
    }
}

#[test]
fn ez_forms_round_trip_and_count() {
    for (name, x) in all_fixtures() {
        let nondeg = x.nondegenerate_counts();
        for n in 0..=x.cutoff() {
            let mut by_base = vec![0usize; n + 1];
            for k in 0..x.count(n) {
                let s = SimplexRef::new(n, k);
                let ez = x.ez_normal_form(s);
                assert!(ez.indices.windows(2).all(|w| w[0] < w[1]), "{name}");
                assert!(!x.is_degenerate(ez.base), "{name}");
                assert_eq!(ez.degree(), n);
                assert_eq!(x.realize(&ez).unwrap(), s, "{name}");
                assert_eq!(ez.is_degenerate(), x.is_degenerate(s));
                by_base[ez.base.degree] += 1;
            }
            for m in 0..=n {
                assert_eq!(by_base[m], binom(n, m) * nondeg[m], "{name} n={n} m={m}");
            }
            assert_eq!(x.count(n), recombined(&nondeg, n), "{name}");
        }
    }
}

#[test]
fn vertex_double_degeneracy_normal_form() {
    let x = fixtures::point(2);
    let s = x.degeneracy(1, 0, x.degeneracy(0, 0, 0));
    let ez = x.ez_normal_form(SimplexRef::new(2, s));
    assert_eq!(ez.indices, vec![0, 1]);
    assert_eq!(ez.base, SimplexRef::new(0, 0));
}

#[test]
fn skeleton_extension_examples() {
    let p = skeleton_extend(&fixtures::point(0), 4).unwrap();
    assert_eq!(p.counts(), vec![1; 5]);
    assert!(p.validate().is_valid());

    let t = skeleton_extend(&fixtures::torus(2), 3).unwrap();
    assert_eq!(t.count(3), 16);
    assert!(t.validate().is_valid());
    assert_eq!(t.truncate(2).unwrap().counts(), fixtures::torus(2).counts());
    assert_eq!(t.truncate(2).unwrap().labels(2), fixtures::torus(2).labels(2));
    for k in 0..t.count(3) {
        assert!(t.is_degenerate(SimplexRef::new(3, k)));
    }
    assert!(skeleton_extend(&fixtures::torus(2), 2).is_err());
}

#[test]
fn truncate_then_extend_recombines_counts() {
    let x = fixtures::full_simplex(2, 3);
    assert_eq!(x.truncate(3).unwrap(), x);
    assert!(x.truncate(4).is_err());
    let low = x.truncate(1).unwrap();
    let y = skeleton_extend(&low, 3).unwrap();
    assert!(y.validate().is_valid());
    let nondeg = low.nondegenerate_counts();
    for n in 0..=3 {
        assert_eq!(y.count(n), recombined(&nondeg, n));
    }
}

/// When every non-degenerate simplex already lies at or below `N`, the
/// skeleton extension is isomorphic to the set built directly at `M`; the
/// isomorphism sends a simplex to the EZ form with the same base label.
fn assert_extension_matches(direct: &TruncatedSimplicialSet, low_cutoff: usize) {
    let ext = skeleton_extend(&direct.truncate(low_cutoff).unwrap(), direct.cutoff()).unwrap();
    assert_eq!(ext.counts(), direct.counts());
    let to_ext = |n: usize, k: usize| -> usize {
        if n <= low_cutoff {
            return k;
        }
        let ez = direct.ez_normal_form(SimplexRef::new(n, k));
        let label = builders::ez_label(&ez.indices, direct.label(ez.base));
        ext.find(n, &label).expect("label present")
    };
    for n in 1..=direct.cutoff() {
        for i in 0..=n {
            for k in 0..direct.count(n) {
                assert_eq!(to_ext(n - 1, direct.face(n, i, k)), ext.face(n, i, to_ext(n, k)));
            }
        }
    }
    for n in 0..direct.cutoff() {
        for i in 0..=n {
            for k in 0..direct.count(n) {
                assert_eq!(to_ext(n + 1, direct.degeneracy(n, i, k)), ext.degeneracy(n, i, to_ext(n, k)));
            }
        }
    }
}

#[test]
fn skeleton_extension_is_isomorphic_to_direct_build() {
    assert_extension_matches(&fixtures::full_simplex(2, 4), 2);
    assert_extension_matches(&fixtures::simplex_boundary(3, 4), 2);
    assert_extension_matches(&fixtures::point_and_circle(3), 1);
}

#[test]
fn morphism_checks() {
    let x = fixtures::torus(2);
    assert!(morphism_validate(&SimplicialMorphismTable::identity(&x), &x, &x).is_valid());

    let z4 = FiniteGroupTable::cyclic(4).unwrap();
    let z2 = FiniteGroupTable::cyclic(2).unwrap();
    let (n4, n2) = (build_nerve_group(&z4, 3).unwrap(), build_nerve_group(&z2, 3).unwrap());
    let phi = SimplicialMorphismTable::from_group_homomorphism(&n4, &n2, &z4, &z2, &[0, 1, 0, 1]).unwrap();
    assert!(morphism_validate(&phi, &n4, &n2).is_valid());
    assert_eq!(phi.map(1), &[0, 1, 0, 1]);

    // send the edge a to the degenerate edge but keep everything else
    let mut maps: Vec<Vec<usize>> = (0..=2).map(|n| (0..x.count(n)).collect()).collect();
    let a = x.find(1, "a").unwrap();
    maps[1][a] = x.find(1, "s[0](v)").unwrap();
    let broken = SimplicialMorphismTable::new(maps, &x, &x).unwrap();
    let rep = morphism_validate(&broken, &x, &x);
    assert!(!rep.is_valid());
    assert!(rep.violations.iter().any(|v| v.relation == Relation::MorphismFace));
}

fn complex_strategy() -> impl Strategy<Value = OrderedComplexTable> {
    (1usize..=5).prop_flat_map(|nv| {
        prop::collection::vec(prop::collection::btree_set(0..nv, 1..=nv.min(4)), 0..4).prop_map(move |facets| {
            let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
            OrderedComplexTable::from_facets(nv, &facets).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_are_valid_and_recombine(cx in complex_strategy(), cutoff in 1usize..4) {
        let x = build_from_complex(&cx, cutoff).unwrap();
        prop_assert!(x.validate().is_valid());
        let nondeg = x.nondegenerate_counts();
        // non-degenerate simplices are exactly the complex simplices of matching size
        for n in 0..=cutoff {
            let expected = cx.simplices().iter().filter(|s| s.len() == n + 1).count();
            prop_assert_eq!(nondeg[n], expected);
            prop_assert_eq!(x.count(n), recombined(&nondeg, n));
            for k in 0..x.count(n) {
                let s = SimplexRef::new(n, k);
                prop_assert_eq!(x.realize(&x.ez_normal_form(s)).unwrap(), s);
            }
        }
    }

    #[test]
    fn random_extensions_stay_valid(cx in complex_strategy(), extra in 1usize..3) {
        let x = build_from_complex(&cx, 2).unwrap();
        let y = skeleton_extend(&x, 2 + extra).unwrap();
        prop_assert!(y.validate().is_valid());
        prop_assert_eq!(y.truncate(2).unwrap().counts(), x.counts());
        let nondeg = x.nondegenerate_counts();
        for n in 0..=2 + extra {
            prop_assert_eq!(y.count(n), recombined(&nondeg, n));
        }
    }
}
