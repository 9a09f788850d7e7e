use clap::Parser;

use super::*;

const TORUS: &str = r#"{"kind":"explicit","truncation":2,
  "labels":[["v"],["a","b","c","s0v"],["T1","T2","s0a","s0b","s0c","s1a","s1b","s1c","s0s0v"]],
  "faces":[
    [[0,0,0,0],[0,0,0,0]],
    [[1,0,0,1,2,3,3,3,3],[2,2,0,1,2,0,1,2,3],[0,1,3,3,3,0,1,2,3]]],
  "degeneracies":[[[3]],[[2,3,4,8],[5,6,7,8]]]}"#;

/// The same torus, extended by its degenerate 3-simplices so that degree 2
/// lies below the cutoff.
fn torus3() -> String {
    TORUS.replacen(r#""truncation":2,"#, r#""truncation":2,"skeleton_extend":3,"#, 1)
}

const Z2: &str = r#"{"kind":"nerve_group","group":{"order":2},"truncation":3}"#;
const Z3: &str = r#"{"kind":"nerve_group","group":{"order":3},"truncation":3}"#;

fn run(args: &[&str], spec: &str) -> Outcome {
    let mut full = vec!["sqhom"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).unwrap();
    execute(&cli, spec, None)
}

#[test]
fn torus_spec_is_valid() {
    let out = run(&["validate", "-"], TORUS);
    assert_eq!(out.exit_code, 0, "{}", out.report.to_json());
    assert_eq!(out.report.input.unwrap().nondegenerate, vec![1, 3, 2]);
}

#[test]
fn betti_table_of_the_torus() {
    let out = run(&["betti", "-", "--method", "exact", "--max-degree", "2"], &torus3());
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.results["betti"]["exact_rank"], serde_json::json!([1, 2, 1]));
    // at the cutoff the value is flagged rather than trusted
    let flat = run(&["betti", "-", "--method", "exact"], TORUS);
    assert_eq!(flat.report.results["tables"][0]["values"][2]["truncation_sensitive"], true);
    let all = run(&["betti", "-"], &torus3());
    assert_eq!(all.exit_code, 0);
    assert_eq!(all.report.results["agree"], true);
    for t in all.report.results["tables"].as_array().unwrap() {
        assert!(t["values"].as_array().unwrap().iter().all(|r| r["method"] == t["method"]));
    }
}

#[test]
fn betti_with_simulation_agrees_on_the_torus() {
    let out = run(&["betti", "-", "--method", "exact", "--method", "qsim", "--seed", "3"], TORUS);
    assert_eq!(out.exit_code, 0, "{}", out.report.to_json());
    assert_eq!(out.report.command.args["seed"], 3);
}

#[test]
fn group_nerves_are_perfect() {
    let out = run(&["perfectness", "-"], Z3);
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.results["class"], "perfect");
}

#[test]
fn defect_scan_counts() {
    let out = run(&["defects", "-"], Z2);
    assert_eq!(out.exit_code, 0);
    let rows = out.report.results["defects"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["is_zero"] == true));
    let short = run(&["defects", "-"], r#"{"kind":"discrete","set_size":1,"truncation":1}"#);
    assert_eq!(short.exit_code, 2);
}

#[test]
fn encodings_verify() {
    for scheme in ["enumerative", "nerve"] {
        let out = run(&["encode", "-", "--scheme", scheme], Z2);
        assert_eq!(out.exit_code, 0, "{scheme}: {}", out.report.to_json());
        assert_eq!(out.report.results["check"]["bijective"], true);
    }
    let cx = r#"{"kind":"ordered_complex","vertex_count":3,"preset":"full","truncation":3}"#;
    assert_eq!(run(&["encode", "-", "--scheme", "complex"], cx).exit_code, 0);
    let wrong = run(&["encode", "-", "--scheme", "complex"], Z2);
    assert_eq!(wrong.exit_code, 2);
    assert_eq!(wrong.report.error.unwrap().kind, "unsupported");
}

#[test]
fn multiplication_circuit() {
    let out = run(&["circuit", "-"], r#"{"kind":"nerve_group","group":{"order":2},"truncation":2}"#);
    assert_eq!(out.exit_code, 0, "{}", out.report.to_json());
    assert_eq!(out.report.results["space_counts"], serde_json::json!([1, 8, 64]));
    let s3 = run(&["circuit", "-"], r#"{"kind":"nerve_group","group":{"symmetric":3},"truncation":2}"#);
    assert_eq!(s3.exit_code, 2);
}

#[test]
fn qsim_reports_are_deterministic() {
    let a = run(&["qsim", "qpe", "-", "--seed", "42", "--shots", "200"], Z2);
    let b = run(&["qsim", "qpe", "-", "--seed", "42", "--shots", "200"], Z2);
    assert_eq!(a.exit_code, 0);
    assert_eq!(a.report.to_json(), b.report.to_json());
    let c = run(&["qsim", "qpe", "-", "--seed", "43", "--shots", "200"], Z2);
    assert_ne!(a.report.to_json(), c.report.to_json());
}

#[test]
fn seed_comes_from_the_environment() {
    let cli = Cli::try_parse_from(["sqhom", "qsim", "qpe", "-", "--degree", "1", "--shots", "10"]).unwrap();
    let out = execute(&cli, Z2, Some("17"));
    assert_eq!(out.report.command.args["seed"], 17);
    let bad = execute(&cli, Z2, Some("seventeen"));
    assert_eq!(bad.exit_code, 2);
    assert_eq!(resolve_seed(Some(5), Some("17")).unwrap(), 5);
    assert_eq!(resolve_seed(None, None).unwrap(), 0);
}

#[test]
fn grover_and_counting_skip_empty_degrees() {
    let out = run(&["qsim", "grover", "-"], TORUS);
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.results["runs"].as_array().unwrap().len(), 3);
    let count = run(&["qsim", "count", "-", "--degree", "2"], Z2);
    assert_eq!(count.report.results["runs"][0]["bits"], 6);
}

#[test]
fn errors_map_to_exit_codes() {
    let bad = run(&["census", "-"], "{not json");
    assert_eq!(bad.exit_code, 2);
    assert_eq!(bad.report.status, "input_error");
    let broken = r#"{"kind":"explicit","truncation":1,
        "labels":[["a","b"],["aa","bb"]],"faces":[[[0,1],[0,1]]],"degeneracies":[[[1,0]]]}"#;
    let v = run(&["validate", "-"], broken);
    assert_eq!(v.exit_code, 2);
    assert_eq!(v.report.results["valid"], false);
    assert!(!v.report.results["violations"].as_array().unwrap().is_empty());
}

#[test]
fn table_rendering_flattens_the_report() {
    let cli = Cli::try_parse_from(["sqhom", "census", "-", "--format", "table"]).unwrap();
    let out = execute(&cli, Z2, None);
    let text = format_outcome(&cli, &out);
    assert!(text.contains("results.totals: [1, 2, 4, 8]"), "{text}");
    assert!(text.contains("status: ok"));
}

#[test]
fn timing_is_opt_in() {
    assert!(run(&["census", "-"], Z2).report.timing.is_none());
    assert!(run(&["census", "-", "--timing"], Z2).report.timing.is_some());
}

#[test]
fn schemas_list_what_the_code_accepts() {
    let spec: serde_json::Value = serde_json::from_str(include_str!("../../schemas/spec.v1.schema.json")).unwrap();
    let kinds: Vec<&str> = spec["$defs"]["node"]["properties"]["kind"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_str().unwrap())
        .collect();
    assert_eq!(kinds, KINDS);
    let report: serde_json::Value = serde_json::from_str(include_str!("../../schemas/report.v1.schema.json")).unwrap();
    assert_eq!(report["properties"]["report_schema"]["const"], REPORT_SCHEMA_VERSION);
    let out = run(&["census", "-"], Z2);
    let doc = serde_json::to_value(&out.report).unwrap();
    for key in report["required"].as_array().unwrap() {
        assert!(doc.get(key.as_str().unwrap()).is_some(), "{key}");
    }
    let statuses = &report["properties"]["status"]["enum"];
    for s in ["ok", "input_error", "invariant_violation"] {
        assert!(statuses.as_array().unwrap().contains(&serde_json::json!(s)));
    }
}
