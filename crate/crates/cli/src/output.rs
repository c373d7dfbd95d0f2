//! Table assembly and serialization.

use std::collections::BTreeMap;

use serde_json::{json, Value};

/// A named-column numeric table with a summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Vec<(&'static str, String)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new(), summary: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl ToString) {
        self.summary.push((key, value.to_string()));
    }

    pub fn to_csv(&self, config: &BTreeMap<&'static str, String>) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| number(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for (k, v) in config {
            out.push_str(&format!("# config.{k}={v}\n"));
        }
        out
    }

    pub fn to_json(&self, config: &BTreeMap<&'static str, String>) -> String {
        let rows: Vec<Value> =
            self.rows.iter().map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect())).collect();
        let summary: serde_json::Map<String, Value> =
            self.summary.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        let doc = json!({
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
            "config": config,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table is serializable");
        s.push('\n');
        s
    }
}

/// 17 significant digits in scientific notation.
pub fn number(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
