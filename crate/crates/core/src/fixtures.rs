//! Small named simplicial sets used by tests, examples and the acceptance
//! suite.

use crate::sset::{
    build_discrete, build_from_cells, build_from_complex, build_nerve, build_nerve_group, disjoint_union, Cell,
    EzForm, FiniteCategoryTable, FiniteGroupTable, OrderedComplexTable, SimplexRef, TruncatedSimplicialSet,
};

fn cell_face(base_degree: usize, base: usize) -> EzForm {
    EzForm {
        indices: Vec::new(),
        base: SimplexRef::new(base_degree, base),
    }
}

/// One simplex in every degree.
pub fn point(cutoff: usize) -> TruncatedSimplicialSet {
    build_discrete(1, cutoff).expect("point")
}

/// The full simplex on `d+1` vertices.
pub fn full_simplex(d: usize, cutoff: usize) -> TruncatedSimplicialSet {
    build_from_complex(&OrderedComplexTable::full(d + 1).expect("full complex"), cutoff).expect("full simplex")
}

/// All proper faces of the full simplex on `d+1` vertices, a `(d-1)`-sphere.
pub fn simplex_boundary(d: usize, cutoff: usize) -> TruncatedSimplicialSet {
    build_from_complex(&OrderedComplexTable::boundary(d + 1).expect("boundary complex"), cutoff).expect("boundary")
}

/// Two triangles `{0,1,2}` and `{1,2,3}` glued along the edge `{1,2}`.
pub fn two_triangles(cutoff: usize) -> TruncatedSimplicialSet {
    let cx = OrderedComplexTable::from_facets(4, &[vec![0, 1, 2], vec![1, 2, 3]]).expect("two triangles");
    build_from_complex(&cx, cutoff).expect("two triangles")
}

/// The minimal torus: one vertex `v`, edges `a, b, c`, triangles `T1, T2`
/// with faces `(d0, d1, d2) = (b, c, a)` and `(a, c, b)`.
pub fn torus(cutoff: usize) -> TruncatedSimplicialSet {
    let v = || cell_face(0, 0);
    let edge = |name: &str| Cell {
        label: name.into(),
        faces: vec![v(), v()],
    };
    let (a, b, c) = (0, 1, 2);
    let tri = |name: &str, faces: [usize; 3]| Cell {
        label: name.into(),
        faces: faces.iter().map(|&e| cell_face(1, e)).collect(),
    };
    let mut cells = vec![vec![Cell::vertex("v")]];
    if cutoff >= 1 {
        cells.push(vec![edge("a"), edge("b"), edge("c")]);
    }
    if cutoff >= 2 {
        cells.push(vec![tri("T1", [b, c, a]), tri("T2", [a, c, b])]);
    }
    build_from_cells(cutoff, cells).expect("torus")
}

/// A circle with one vertex and one loop.
pub fn circle(cutoff: usize) -> TruncatedSimplicialSet {
    let mut cells = vec![vec![Cell::vertex("v")]];
    if cutoff >= 1 {
        cells.push(vec![Cell {
            label: "e".into(),
            faces: vec![cell_face(0, 0), cell_face(0, 0)],
        }]);
    }
    build_from_cells(cutoff, cells).expect("circle")
}

pub fn cyclic_nerve(order: usize, cutoff: usize) -> TruncatedSimplicialSet {
    build_nerve_group(&FiniteGroupTable::cyclic(order).expect("cyclic group"), cutoff).expect("nerve")
}

pub fn s3_nerve(cutoff: usize) -> TruncatedSimplicialSet {
    build_nerve_group(&FiniteGroupTable::symmetric(3).expect("S3"), cutoff).expect("nerve")
}

/// Nerve of the poset category `0 → 1 → 2`.
pub fn poset_nerve(cutoff: usize) -> TruncatedSimplicialSet {
    build_nerve(&FiniteCategoryTable::linear_order(3).expect("poset"), cutoff).expect("nerve")
}

/// Disjoint union of a point and a circle.
pub fn point_and_circle(cutoff: usize) -> TruncatedSimplicialSet {
    disjoint_union(&point(cutoff), &circle(cutoff)).expect("union")
}

/// Every named fixture at a cutoff small enough for exhaustive checks.
pub fn catalogue() -> Vec<(&'static str, TruncatedSimplicialSet)> {
    vec![
        ("point", point(3)),
        ("discrete3", build_discrete(3, 2).expect("discrete")),
        ("delta2", full_simplex(2, 3)),
        ("delta3", full_simplex(3, 3)),
        ("boundary_delta3", simplex_boundary(3, 3)),
        ("two_triangles", two_triangles(3)),
        ("torus", torus(3)),
        ("circle", circle(3)),
        ("z2_nerve", cyclic_nerve(2, 3)),
        ("z3_nerve", cyclic_nerve(3, 3)),
        ("s3_nerve", s3_nerve(2)),
        ("poset_nerve", poset_nerve(3)),
        ("point_and_circle", point_and_circle(2)),
    ]
}
