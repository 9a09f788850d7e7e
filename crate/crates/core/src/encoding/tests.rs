use proptest::prelude::*;

use super::*;
use crate::fixtures;

#[test]
fn nerve_census_matches_closed_forms() {
    let report = census(&fixtures::cyclic_nerve(2, 3)).unwrap();
    assert_eq!(report.totals, vec![1, 2, 4, 8]);
    assert_eq!(report.nondegenerate, vec![1, 1, 1, 1]);
    assert_eq!(report.truncation_total, 15);
    assert_eq!(report.kappa, 4);
    assert_eq!(report.ratios, vec![Some(1.0), Some(2.0), Some(4.0), Some(8.0)]);
    for order in 1..=4u64 {
        let g = FiniteGroupTable::cyclic(order as usize).unwrap();
        for cutoff in 0..=3u32 {
            let r = census(&build_nerve_group(&g, cutoff as usize).unwrap()).unwrap();
            for n in 0..=cutoff {
                assert_eq!(r.totals[n as usize], nerve_counts::total(order, n));
                assert_eq!(r.nondegenerate[n as usize], nerve_counts::nondegenerate(order, n));
            }
            assert_eq!(r.truncation_total, nerve_counts::truncation_total(order, cutoff));
        }
    }
}

#[test]
fn complex_census_matches_closed_forms() {
    let r = census(&fixtures::full_simplex(2, 2)).unwrap();
    assert_eq!(r.totals[2], 10);
    assert_eq!(r.nondegenerate[2], 1);
    assert_eq!(r.ratios[2], Some(10.0));
    for d in 0..=3u64 {
        for cutoff in 0..=d {
            let r = census(&fixtures::full_simplex(d as usize, cutoff as usize)).unwrap();
            for n in 0..=cutoff {
                assert_eq!(r.totals[n as usize], complex_counts::total(d, n));
                assert_eq!(r.nondegenerate[n as usize], complex_counts::nondegenerate(d, n));
            }
            assert_eq!(r.truncation_total, complex_counts::truncation_total(d, cutoff));
        }
    }
}

#[test]
fn census_ratio_is_one_in_degree_zero() {
    for (name, x) in fixtures::catalogue() {
        let r = census(&x).unwrap();
        assert_eq!(r.ratios[0], Some(1.0), "{name}");
        assert_eq!(r.kappa, register_width(r.truncation_total));
    }
    let torus = census(&fixtures::torus(3)).unwrap();
    assert_eq!(torus.ratios[3], None);
}

#[test]
fn register_width_is_the_ceiling_log() {
    let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (15, 4), (16, 4), (17, 5)];
    for (total, kappa) in expect {
        assert_eq!(register_width(total), kappa, "{total}");
    }
}

#[test]
fn enumerative_encoding_of_a_point() {
    let e = enumerative_encoding(&fixtures::point(1)).unwrap();
    assert_eq!(e.width(), 1);
    let bits: Vec<String> = e.listing().into_iter().map(|r| r.bits).collect();
    assert_eq!(bits, vec!["0", "1"]);
    assert!(e.verify().unwrap().passed());
}

#[test]
fn enumerative_encodings_verify_and_round_trip() {
    for (name, x) in fixtures::catalogue() {
        let e = enumerative_encoding(&x).unwrap();
        let check = e.verify().unwrap();
        assert!(check.passed(), "{name}: {check:?}");
        assert!(check.identities_checked > 0 || x.cutoff() == 0, "{name}");
        for n in 0..=x.cutoff() {
            for k in 0..x.count(n) {
                let s = SimplexRef::new(n, k);
                assert_eq!(e.decode(e.parse(&e.bits(s)).unwrap()), Some(s));
            }
        }
    }
}

#[test]
fn nerve_scheme_layout() {
    let g = FiniteGroupTable::cyclic(2).unwrap();
    let e = nerve_register_encoding(&g, 3, 1, 2).unwrap();
    assert_eq!(e.width(), 5);
    assert_eq!(e.bits(SimplexRef::new(0, 0)), "00000");
    // (g, e) is string 2 and encodes as (1, 0, 0; 2)
    assert_eq!(e.bits(SimplexRef::new(2, 2)), "10010");
    // d_{2,1}(g, g) = g·g = e
    let gg = e.parse("11010").unwrap();
    assert_eq!(e.format(e.encoded(OperatorKind::Face, 2, 1, gg).unwrap()), "00001");
    // s_{1,0}(g) inserts the identity slot in front
    let single = e.parse("10001").unwrap();
    assert_eq!(e.format(e.encoded(OperatorKind::Degeneracy, 1, 0, single).unwrap()), "01010");
    assert!(e.verify().unwrap().passed());
}

#[test]
fn nerve_scheme_verifies_for_several_groups() {
    for g in [
        FiniteGroupTable::cyclic(3).unwrap(),
        FiniteGroupTable::cyclic(4).unwrap(),
        FiniteGroupTable::symmetric(3).unwrap(),
    ] {
        let e = nerve_register_encoding(&g, 3, register_width(g.order() as u64), 2).unwrap();
        let check = e.verify().unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(check.faces_checked, check.faces_agreeing);
    }
}

#[test]
fn nerve_scheme_rejects_narrow_registers() {
    let g = FiniteGroupTable::cyclic(3).unwrap();
    assert!(matches!(nerve_register_encoding(&g, 3, 1, 2), Err(Error::InvalidInput(_))));
    assert!(matches!(nerve_register_encoding(&g, 4, 2, 2), Err(Error::InvalidInput(_))));
    assert!(nerve_register_encoding(&g, 3, 2, 2).is_ok());
}

#[test]
fn complex_scheme_counts_vertices() {
    let cx = OrderedComplexTable::full(3).unwrap();
    let e = complex_register_encoding(&cx, 3, 3).unwrap();
    let x = e.simplicial_set();
    let k = x.find(2, "(0,0,2)").unwrap();
    assert_eq!(e.bits(SimplexRef::new(2, k)), "010000001");
    let check = e.verify().unwrap();
    assert_eq!(check.sum_rule, Some(true));
    assert!(check.passed(), "{check:?}");
    assert!(matches!(complex_register_encoding(&cx, 3, 2), Err(Error::InvalidInput(_))));
}

#[test]
fn complex_scheme_on_a_subcomplex() {
    let cx = OrderedComplexTable::from_facets(4, &[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    let e = complex_register_encoding(&cx, 3, 3).unwrap();
    assert!(e.verify().unwrap().passed());
}

#[test]
fn encoded_maps_reject_foreign_strings() {
    let g = FiniteGroupTable::cyclic(3).unwrap();
    let e = nerve_register_encoding(&g, 2, 2, 2).unwrap();
    // slot value 3 encodes no element
    let bad = e.parse("110001").unwrap();
    assert!(e.encoded(OperatorKind::Face, 1, 0, bad).is_err());
    assert!(e.encoded(OperatorKind::Degeneracy, 2, 0, 0).is_err());
}

#[test]
fn truth_tables_list_every_input() {
    let e = nerve_register_encoding(&FiniteGroupTable::cyclic(2).unwrap(), 2, 1, 2).unwrap();
    let table = e.truth_table(OperatorKind::Face, 2, 1).unwrap();
    assert_eq!(table.len(), 4);
    assert!(table.contains(&("1110".to_string(), "0001".to_string())));
}

#[test]
fn permutation_must_cover_the_range() {
    let e = enumerative_encoding(&fixtures::point(1)).unwrap();
    assert!(e.permuted(&[0, 0]).is_err());
    assert!(e.permuted(&[0]).is_err());
}

fn fixture_and_permutation() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0usize..3).prop_flat_map(|which| {
        let total = enumerative_encoding(&permutation_fixture(which)).unwrap().listing().len();
        (Just(which), Just((0..total).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn permutation_fixture(which: usize) -> TruncatedSimplicialSet {
    match which {
        0 => fixtures::cyclic_nerve(2, 3),
        1 => fixtures::torus(2),
        _ => fixtures::two_triangles(2),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn permuted_encodings_stay_valid((which, perm) in fixture_and_permutation()) {
        let e = enumerative_encoding(&permutation_fixture(which)).unwrap();
        let p = e.permuted(&perm).unwrap();
        prop_assert_eq!(p.scheme(), &EncodingScheme::Permuted);
        prop_assert!(p.verify().unwrap().passed());
    }

    #[test]
    fn census_recombines_on_random_complexes(
        facets in prop::collection::vec(prop::collection::btree_set(0usize..5, 1..=3), 1..5),
        cutoff in 1usize..4,
    ) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
        let cx = OrderedComplexTable::from_facets(5, &facets).unwrap();
        let r = census(&build_from_complex(&cx, cutoff).unwrap()).unwrap();
        for n in 0..=cutoff {
            prop_assert_eq!(recombine(&r.nondegenerate, n), r.totals[n]);
        }
        prop_assert!(r.truncation_total <= 1u64 << r.kappa);
        prop_assert!(r.kappa == 0 || r.truncation_total > 1u64 << (r.kappa - 1));
    }
}
