//! Tables and their CSV / JSON renderings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::{Format, SweepConfig};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Key/value lines emitted after the rows.
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn num(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn text(&self, row: usize, name: &str) -> Option<&str> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// Twelve significant digits, shortest of fixed or exponent notation,
/// trailing zeros removed. Independent of locale.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.to_string() }
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_number(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_value(c: &Cell) -> Value {
    match c {
        Cell::Num(v) if v.is_finite() => json!(v),
        Cell::Num(v) => json!(format_number(*v)),
        Cell::Int(v) => json!(v),
        Cell::Text(s) => json!(s),
        Cell::Bool(b) => json!(b),
        Cell::Empty => Value::Null,
    }
}

pub fn render_csv(table: &Table, config: &SweepConfig) -> String {
    let mut out = String::new();
    writeln!(out, "# config: {}", config.to_json()).unwrap();
    writeln!(out, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(csv_field).collect();
        writeln!(out, "{}", fields.join(",")).unwrap();
    }
    if !table.summary.is_empty() {
        let parts: Vec<String> =
            table.summary.iter().map(|(k, v)| format!("{k}={}", csv_field(v))).collect();
        writeln!(out, "# summary: {}", parts.join(" ")).unwrap();
    }
    out
}

pub fn render_json(table: &Table, config: &SweepConfig) -> String {
    let config: Value = serde_json::from_str(&config.to_json()).expect("config is JSON");
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let m: Map<String, Value> =
                table.columns.iter().cloned().zip(r.iter().map(json_value)).collect();
            Value::Object(m)
        })
        .collect();
    let summary: Map<String, Value> =
        table.summary.iter().map(|(k, v)| (k.clone(), json_value(v))).collect();
    let doc = json!({
        "config": config,
        "columns": table.columns,
        "rows": rows,
        "summary": summary,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
    s.push('\n');
    s
}

pub fn render(table: &Table, config: &SweepConfig, format: Format) -> String {
    match format {
        Format::Csv => render_csv(table, config),
        Format::Json => render_json(table, config),
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(2.0 / 7.0), "0.285714285714");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.5), "-0.5");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(1e-9), "1e-9");
        assert_eq!(format_number(-3.25e-12), "-3.25e-12");
        assert_eq!(format_number(6.02214076e23), "6.02214076e23");
        assert_eq!(format_number(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(format_number(-1e-300 * 1e-300), "0");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_has_config_header_and_summary() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![1.5.into(), Cell::Empty, "x,y".into()]);
        t.summary.push(("all_pass".into(), true.into()));
        let cfg = SweepConfig::new(Scenario::Otto);
        let csv = render_csv(&t, &cfg);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config: {\"scenario\":\"otto\""));
        assert_eq!(lines[1], "a,b,c");
        assert_eq!(lines[2], "1.5,,\"x,y\"");
        assert_eq!(lines[3], "# summary: all_pass=true");
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![Cell::Int(3), Cell::Empty]);
        let v: Value = serde_json::from_str(&render_json(&t, &SweepConfig::new(Scenario::Otto))).unwrap();
        assert_eq!(v["rows"][0]["x"], json!(3));
        assert!(v["rows"][0]["y"].is_null());
        assert_eq!(v["config"]["scenario"], json!("otto"));
    }
}
