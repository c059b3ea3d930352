//! CSV rendering of a JSON report.

use serde_json::{Map, Value};

use crate::commands::Table;

/// Integers print exactly; other numbers with 17 significant digits.
pub fn format_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        return i.to_string();
    }
    if let Some(u) = n.as_u64() {
        return u.to_string();
    }
    let x = n.as_f64().unwrap_or(f64::NAN);
    format!("{x:.16e}")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => format_number(n),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

/// A table when the report designates one, `key,value` rows otherwise.
/// Header comment lines carry the schema, the resolved configuration and,
/// in table form, the remaining scalar fields.
pub fn to_csv(doc: &Map<String, Value>, table: Option<Table>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut head = String::new();
    for key in ["schema", "command"] {
        if let Some(v) = doc.get(key) {
            head.push_str(&format!("# {key}: {}\n", cell(v)));
        }
    }
    if let Some(c) = doc.get("config") {
        head.push_str(&format!("# config: {c}\n"));
    }
    let rows = table.and_then(|t| doc.get(t.key).and_then(Value::as_array).map(|r| (t, r)));
    match rows {
        Some((t, rows)) => {
            let mut pairs = Vec::new();
            for (k, v) in doc {
                if !matches!(k.as_str(), "config" | "schema" | "command") && k != t.key {
                    flatten(k, v, &mut pairs);
                }
            }
            for (k, v) in pairs {
                head.push_str(&format!("# {k}: {v}\n"));
            }
            let columns: Vec<String> = match t.columns {
                Some(cs) => cs.iter().map(|c| c.to_string()).collect(),
                None => match rows.first() {
                    Some(Value::Object(m)) => m.keys().cloned().collect(),
                    _ => vec!["value".to_string()],
                },
            };
            w.write_record(&columns).expect("in-memory write");
            for r in rows {
                let rec: Vec<String> = match r {
                    Value::Object(m) => columns.iter().map(|c| m.get(c).map(cell).unwrap_or_default()).collect(),
                    other => vec![cell(other)],
                };
                w.write_record(&rec).expect("in-memory write");
            }
        }
        None => {
            let mut pairs = Vec::new();
            for (k, v) in doc {
                if k != "config" && k != "schema" && k != "command" && k != "runtime_ms" {
                    flatten(k, v, &mut pairs);
                }
            }
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in pairs {
                w.write_record([k, v]).expect("in-memory write");
            }
        }
    }
    let body = String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8");
    head + &body
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers() {
        let n = |v: Value| format_number(v.as_number().unwrap());
        assert_eq!(n(json!(13)), "13");
        assert_eq!(n(json!(-2)), "-2");
        let s = n(json!(0.1));
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn table_and_pairs() {
        let doc = json!({"schema": "x", "rows": [{"p": 2, "v": 0.5}, {"p": 3, "v": 0.25}], "n": {"a": 1}});
        let m = doc.as_object().unwrap();
        let t = to_csv(m, Some(Table { key: "rows", columns: None }));
        assert!(t.contains("p,v\n2,5.0000000000000000e-1\n"));
        let p = to_csv(m, None);
        assert!(p.contains("n.a,1\n"));
        assert!(p.contains("rows.1.p,3\n"));
    }
}
