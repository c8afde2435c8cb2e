//! Table rendering: `#`-commented CSV and JSON with a metadata object.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::config::Params;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // Round through the CSV form so both formats carry the same digits.
            Cell::Real(v) => format_real(*v).parse::<f64>().map(|x| json!(x)).unwrap_or(Value::Null),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        // Avoid a signed zero in the output.
        return format!("{:.11e}", 0.0);
    }
    format!("{v:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn render_csv(scenario: &str, params: &Params, extra: &[(&str, String)], table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# decayclock {scenario}");
    for (k, v) in params.iter() {
        let _ = writeln!(out, "# {k} = {v}");
    }
    for (k, v) in extra {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(scenario: &str, params: &Params, extra: &[(&str, String)], table: &Table) -> String {
    let mut config = Map::new();
    for (k, v) in params.iter() {
        config.insert(k.clone(), json!(v));
    }
    for (k, v) in extra {
        config.insert(k.to_string(), json!(v));
    }
    let rows: Vec<Value> = table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
    let doc = json!({
        "metadata": { "scenario": scenario, "config": config },
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(0.0039894228040143), "3.98942280401e-3");
        assert_eq!(format_real(-0.0), "0.00000000000e0");
        assert_eq!(format_real(250.0), "2.50000000000e2");
    }
}
