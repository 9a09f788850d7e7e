//! Spec documents: JSON descriptions of simplicial sets.
//!
//! Every node carries a `kind`, an optional `truncation` (required at the
//! top, inherited by nested operands) and an optional `skeleton_extend`.
//! The remaining keys are the kind's payload. Errors name the offending
//! location as a JSON pointer.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::sset::{
    build_discrete, build_discrete_group, build_from_complex, build_nerve, build_nerve_group, disjoint_union, product,
    skeleton_extend, FiniteCategoryTable, FiniteGroupTable, MorphismEntry, OrderedComplexTable, Provenance,
    TruncatedSimplicialSet,
};

/// The kinds a spec node may have.
pub const KINDS: [&str; 7] = [
    "discrete",
    "nerve_category",
    "nerve_group",
    "ordered_complex",
    "explicit",
    "product",
    "disjoint_union",
];

/// A parsed spec: the simplicial set plus the generator data that some
/// commands need beyond the tables.
#[derive(Clone, Debug)]
pub struct ParsedSpec {
    pub set: TruncatedSimplicialSet,
    /// The ordered complex of a top-level `ordered_complex` node without
    /// skeleton extension.
    pub complex: Option<OrderedComplexTable>,
}

impl ParsedSpec {
    /// The group of a top-level group nerve, if that is what the spec describes.
    pub fn nerve_group(&self) -> Option<&FiniteGroupTable> {
        match self.set.provenance().group() {
            Some((g, true)) => Some(g),
            _ => None,
        }
    }
}

/// A finite group: `{"order": k}` for the cyclic group, `{"symmetric": k}`
/// for the symmetric group on `k` letters, or an explicit multiplication
/// table with optional labels.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    order: Option<usize>,
    symmetric: Option<usize>,
    labels: Option<Vec<String>>,
    table: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    fn build(self) -> Result<FiniteGroupTable> {
        match (self.order, self.symmetric, self.labels, self.table) {
            (order, None, labels, Some(table)) => {
                if let Some(k) = order {
                    if k != table.len() {
                        return Err(Error::invalid(format!("order {k} does not match a table with {} rows", table.len())));
                    }
                }
                let labels = labels.unwrap_or_else(|| (0..table.len()).map(|g| g.to_string()).collect());
                FiniteGroupTable::new(labels, table)
            }
            (Some(k), None, None, None) => FiniteGroupTable::cyclic(k),
            (None, Some(k), None, None) => FiniteGroupTable::symmetric(k),
            _ => Err(Error::invalid(
                "a group is given by `order` alone, `symmetric` alone, or an explicit `table`",
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismSpec {
    name: String,
    source: usize,
    target: usize,
}

/// A finite category: `{"linear_order": k}` or explicit tables. Composites
/// are triples `[f, g, h]` meaning "first `f`, then `g`" equals `h`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategorySpec {
    linear_order: Option<usize>,
    objects: Option<Vec<String>>,
    morphisms: Option<Vec<MorphismSpec>>,
    identities: Option<Vec<usize>>,
    composites: Option<Vec<(usize, usize, usize)>>,
}

impl CategorySpec {
    fn build(self) -> Result<FiniteCategoryTable> {
        match self {
            CategorySpec {
                linear_order: Some(k),
                objects: None,
                morphisms: None,
                identities: None,
                composites: None,
            } => FiniteCategoryTable::linear_order(k),
            CategorySpec {
                linear_order: None,
                objects: Some(objects),
                morphisms: Some(morphisms),
                identities: Some(identities),
                composites,
            } => FiniteCategoryTable::new(
                objects,
                morphisms
                    .into_iter()
                    .map(|m| MorphismEntry {
                        name: m.name,
                        source: m.source,
                        target: m.target,
                    })
                    .collect(),
                &composites.unwrap_or_default(),
                identities,
            ),
            _ => Err(Error::invalid(
                "a category is given by `linear_order` alone, or by `objects`, `morphisms`, `identities` and `composites`",
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteSpec {
    set_size: Option<usize>,
    group: Option<GroupSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NerveCategorySpec {
    category: CategorySpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NerveGroupSpec {
    group: GroupSpec,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ComplexPreset {
    Full,
    Boundary,
}

/// Exactly one of `facets`, `simplices` (downward closed) or `preset`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderedComplexSpec {
    vertex_count: usize,
    facets: Option<Vec<Vec<usize>>>,
    simplices: Option<Vec<Vec<usize>>>,
    preset: Option<ComplexPreset>,
}

impl OrderedComplexSpec {
    fn build(self) -> Result<OrderedComplexTable> {
        match (self.facets, self.simplices, self.preset) {
            (Some(f), None, None) => OrderedComplexTable::from_facets(self.vertex_count, &f),
            (None, Some(s), None) => OrderedComplexTable::new(self.vertex_count, s),
            (None, None, Some(ComplexPreset::Full)) => OrderedComplexTable::full(self.vertex_count),
            (None, None, Some(ComplexPreset::Boundary)) => OrderedComplexTable::boundary(self.vertex_count),
            _ => Err(Error::invalid("an ordered complex needs exactly one of `facets`, `simplices`, `preset`")),
        }
    }
}

/// Tables in the layout of [`TruncatedSimplicialSet::from_tables`], except
/// that `faces[k]` holds the face maps of degree `k + 1`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitSpec {
    labels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorsSpec {
    factors: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummandsSpec {
    summands: Vec<Value>,
}

fn pointer(base: &str, path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = base.to_string();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn at(ptr: &str) -> &str {
    if ptr.is_empty() {
        "/"
    } else {
        ptr
    }
}

fn payload<T: DeserializeOwned>(obj: Map<String, Value>, ptr: &str) -> Result<T> {
    serde_path_to_error::deserialize(Value::Object(obj))
        .map_err(|e| Error::invalid(format!("schema error at {}: {}", at(&pointer(ptr, e.path())), e.inner())))
}

/// Attaches a JSON pointer to a builder error.
fn located(ptr: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::invalid(format!("at {}: {m}", at(ptr))),
        other => other,
    }
}

fn take_usize(obj: &mut Map<String, Value>, key: &str, ptr: &str) -> Result<Option<usize>> {
    match obj.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|k| Some(k as usize))
            .ok_or_else(|| Error::invalid(format!("schema error at {ptr}/{key}: expected a non-negative integer"))),
    }
}

/// Parses a spec document and builds its simplicial set. The result is
/// validated; a set violating a simplicial relation is refused.
pub fn parse_spec(text: &str) -> Result<ParsedSpec> {
    let parsed = parse_spec_unchecked(text)?;
    parsed.set.validate().into_result()?;
    Ok(parsed)
}

/// Like [`parse_spec`] but leaves validation to the caller.
pub fn parse_spec_unchecked(text: &str) -> Result<ParsedSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("spec is not JSON: {e}")))?;
    parse_node(value, "", None)
}

fn parse_node(value: Value, ptr: &str, inherited: Option<usize>) -> Result<ParsedSpec> {
    let Value::Object(mut obj) = value else {
        return Err(Error::invalid(format!("schema error at {}: expected an object", at(ptr))));
    };
    let kind = match obj.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(Error::invalid(format!("schema error at {ptr}/kind: expected a string"))),
        None => return Err(Error::invalid(format!("schema error at {}: missing field `kind`", at(ptr)))),
    };
    let truncation = take_usize(&mut obj, "truncation", ptr)?
        .or(inherited)
        .ok_or_else(|| Error::invalid(format!("schema error at {}: missing field `truncation`", at(ptr))))?;
    let extend = take_usize(&mut obj, "skeleton_extend", ptr)?;

    let mut complex = None;
    let set = match kind.as_str() {
        "discrete" => {
            let s: DiscreteSpec = payload(obj, ptr)?;
            match (s.set_size, s.group) {
                (Some(k), None) => build_discrete(k, truncation),
                (None, Some(g)) => build_discrete_group(&g.build().map_err(|e| located(&format!("{ptr}/group"), e))?, truncation),
                _ => Err(Error::invalid("a discrete set needs exactly one of `set_size`, `group`")),
            }
            .map_err(|e| located(ptr, e))?
        }
        "nerve_category" => {
            let s: NerveCategorySpec = payload(obj, ptr)?;
            let cat = s.category.build().map_err(|e| located(&format!("{ptr}/category"), e))?;
            build_nerve(&cat, truncation)?
        }
        "nerve_group" => {
            let s: NerveGroupSpec = payload(obj, ptr)?;
            let g = s.group.build().map_err(|e| located(&format!("{ptr}/group"), e))?;
            build_nerve_group(&g, truncation)?
        }
        "ordered_complex" => {
            let s: OrderedComplexSpec = payload(obj, ptr)?;
            let cx = s.build().map_err(|e| located(ptr, e))?;
            let set = build_from_complex(&cx, truncation)?;
            if ptr.is_empty() && extend.is_none() {
                complex = Some(cx);
            }
            set
        }
        "explicit" => {
            let s: ExplicitSpec = payload(obj, ptr)?;
            let mut faces = vec![Vec::new()];
            faces.extend(s.faces);
            let set = TruncatedSimplicialSet::from_tables(s.labels, faces, s.degeneracies, Provenance::Explicit)
                .map_err(|e| located(ptr, e))?;
            if truncation > set.cutoff() {
                return Err(Error::invalid(format!(
                    "at {}: truncation {truncation} exceeds the {} degrees given; use skeleton_extend",
                    at(ptr),
                    set.cutoff()
                )));
            }
            set.truncate(truncation)?
        }
        "product" | "disjoint_union" => {
            let (key, operands) = if kind == "product" {
                ("factors", payload::<FactorsSpec>(obj, ptr)?.factors)
            } else {
                ("summands", payload::<SummandsSpec>(obj, ptr)?.summands)
            };
            if operands.len() < 2 {
                return Err(Error::invalid(format!("at {ptr}/{key}: needs at least two operands")));
            }
            let mut acc: Option<TruncatedSimplicialSet> = None;
            for (k, v) in operands.into_iter().enumerate() {
                let child_ptr = format!("{ptr}/{key}/{k}");
                let child = parse_node(v, &child_ptr, Some(truncation))?.set;
                let child = fit_cutoff(child, truncation, &child_ptr)?;
                acc = Some(match acc {
                    None => child,
                    Some(a) if kind == "product" => product(&a, &child)?,
                    Some(a) => disjoint_union(&a, &child)?,
                });
            }
            acc.expect("at least two operands")
        }
        other => {
            return Err(Error::invalid(format!(
                "schema error at {ptr}/kind: unknown kind {other:?}, expected one of {}",
                KINDS.join(", ")
            )))
        }
    };
    let set = match extend {
        None => set,
        Some(m) => skeleton_extend(&set, m).map_err(|e| located(&format!("{ptr}/skeleton_extend"), e))?,
    };
    Ok(ParsedSpec { set, complex })
}

/// Brings an operand to the parent's truncation: higher cutoffs are truncated,
/// lower ones are refused.
fn fit_cutoff(x: TruncatedSimplicialSet, cutoff: usize, ptr: &str) -> Result<TruncatedSimplicialSet> {
    if x.cutoff() < cutoff {
        return Err(Error::invalid(format!(
            "at {ptr}: operand stops at degree {} but the enclosing truncation is {cutoff}",
            x.cutoff()
        )));
    }
    x.truncate(cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn group_nerve_matches_the_builder() {
        let p = parse_spec(r#"{"kind":"nerve_group","group":{"order":2},"truncation":3}"#).unwrap();
        assert_eq!(p.set, fixtures::cyclic_nerve(2, 3));
        assert_eq!(p.nerve_group().unwrap().order(), 2);
        let table = r#"{"kind":"nerve_group","group":{"table":[[0,1],[1,0]]},"truncation":3}"#;
        assert_eq!(parse_spec(table).unwrap().set.counts(), vec![1, 2, 4, 8]);
    }

    #[test]
    fn discrete_point() {
        let p = parse_spec(r#"{"kind":"discrete","set_size":1,"truncation":2}"#).unwrap();
        assert_eq!(p.set, fixtures::point(2));
    }

    #[test]
    fn broken_composition_names_the_law() {
        let doc = r#"{"kind":"nerve_category","truncation":2,"category":{
            "objects":["a"],
            "morphisms":[{"name":"id","source":0,"target":0},{"name":"f","source":0,"target":0}],
            "identities":[0],
            "composites":[[0,0,0],[0,1,1],[1,0,0],[1,1,0]]}}"#;
        let err = parse_spec(doc).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(err.to_string().contains("unit law"), "{err}");
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let doc = r#"{"kind":"product","truncation":2,"factors":[
            {"kind":"discrete","set_size":1},
            {"kind":"nerve_group","group":{"table":[[0,1],[1,"x"]]}}]}"#;
        let err = parse_spec(doc).unwrap_err().to_string();
        assert!(err.contains("/factors/1/group/table/1/1"), "{err}");
        let err = parse_spec(r#"{"kind":"discrete","set_size":1}"#).unwrap_err().to_string();
        assert!(err.contains("truncation"), "{err}");
        let err = parse_spec(r#"{"kind":"blob","truncation":1}"#).unwrap_err().to_string();
        assert!(err.contains("/kind"), "{err}");
        let err = parse_spec(r#"{"kind":"discrete","set_size":1,"truncation":1,"extra":0}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn nested_operands_inherit_the_truncation() {
        let doc = r#"{"kind":"disjoint_union","truncation":2,"summands":[
            {"kind":"discrete","set_size":1},
            {"kind":"ordered_complex","vertex_count":3,"preset":"boundary","truncation":3}]}"#;
        let p = parse_spec(doc).unwrap();
        let circle = fixtures::simplex_boundary(2, 2);
        assert_eq!(p.set.counts()[0], 1 + circle.counts()[0]);
        assert_eq!(p.set.cutoff(), 2);
        assert!(p.complex.is_none());
    }

    #[test]
    fn complex_and_extension() {
        let p = parse_spec(r#"{"kind":"ordered_complex","vertex_count":3,"preset":"full","truncation":2}"#).unwrap();
        assert_eq!(p.set, fixtures::full_simplex(2, 2));
        assert!(p.complex.is_some());
        let e = parse_spec(r#"{"kind":"discrete","set_size":1,"truncation":1,"skeleton_extend":4}"#).unwrap();
        assert_eq!(e.set.counts(), vec![1; 5]);
        assert!(parse_spec(r#"{"kind":"discrete","set_size":1,"truncation":2,"skeleton_extend":1}"#).is_err());
    }

    #[test]
    fn explicit_tables_are_validated() {
        // a circle: one vertex v, one loop e, and its degeneracy
        let good = r#"{"kind":"explicit","truncation":1,
            "labels":[["v"],["e","s0v"]],
            "faces":[[[0,0],[0,0]]],
            "degeneracies":[[[1]]]}"#;
        assert_eq!(parse_spec(good).unwrap().set.counts(), vec![1, 2]);
        // two vertices with s_0 landing on an edge whose faces disagree
        let bad = r#"{"kind":"explicit","truncation":1,
            "labels":[["a","b"],["aa","bb"]],
            "faces":[[[0,1],[0,1]]],
            "degeneracies":[[[1,0]]]}"#;
        let err = parse_spec(bad).unwrap_err().to_string();
        assert!(err.contains("relation"), "{err}");
        assert!(parse_spec_unchecked(bad).is_ok());
    }
}
