use serde_json::Value;

use super::ReportDocument;

/// Plain-text rendering of a report: one `path: value` line per leaf, with
/// arrays of scalars kept on one line.
pub fn render_table(report: &ReportDocument) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = String::new();
    walk(&value, "", &mut out);
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn walk(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                walk(child, &join(k), out);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", cells.join(", ")));
        }
        Value::Array(items) => {
            for (k, child) in items.iter().enumerate() {
                walk(child, &join(&k.to_string()), out);
            }
        }
        leaf => out.push_str(&format!("{path}: {}\n", scalar(leaf))),
    }
}
