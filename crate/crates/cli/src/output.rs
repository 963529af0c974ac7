//! Tabular and document output. Floats are written in scientific notation
//! with 9 significant digits in both CSV and JSON so identical runs give
//! byte-identical files.

use serde_json::{json, Map, Value};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::config::{Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => sci(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => {
                // round through the text form so JSON carries the same digits
                let r: f64 = sci(*x).parse().unwrap_or(f64::NAN);
                serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
            }
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as i64)
    }
}

/// 9 significant digits, scientific. Negative zero prints as zero.
pub fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    /// Named scalar results with their units.
    pub values: Vec<(String, Cell, String)>,
    pub tables: Vec<(String, Table)>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            values: Vec::new(),
            tables: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn value(&mut self, name: &str, v: impl Into<Cell>, unit: &str) {
        self.values.push((name.to_string(), v.into(), unit.to_string()));
    }

    pub fn table(&mut self, name: &str, t: Table) {
        self.tables.push((name.to_string(), t));
    }

    fn values_table(&self) -> Table {
        let mut t = Table::new(&["quantity", "value", "unit"]);
        for (n, v, u) in &self.values {
            t.push(vec![n.as_str().into(), v.clone(), u.as_str().into()]);
        }
        t
    }

    /// (file suffix, CSV text) pairs.
    pub fn csv_parts(&self) -> Vec<(String, String)> {
        let mut parts = Vec::new();
        if !self.values.is_empty() {
            parts.push((String::new(), self.values_table().to_csv()));
        }
        for (name, t) in &self.tables {
            parts.push((format!("_{name}"), t.to_csv()));
        }
        parts
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let mut values = Map::new();
        for (n, v, u) in &self.values {
            values.insert(n.clone(), json!({ "value": v.json(), "unit": u }));
        }
        let mut tables = Map::new();
        for (n, t) in &self.tables {
            tables.insert(n.clone(), t.to_json());
        }
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": serde_json::to_value(config).expect("config serialises"),
            "values": values,
            "tables": tables,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
        s.push('\n');
        s
    }

    /// Writes to `dir` (one file per part) or to `out` when no directory is
    /// configured.
    pub fn emit(&self, config: &RunConfig, out: &mut dyn Write) -> io::Result<()> {
        let dir = config.output.dir.as_deref();
        match (config.output.format, dir) {
            (Format::Json, None) => out.write_all(self.to_json(config).as_bytes()),
            (Format::Json, Some(d)) => {
                fs::create_dir_all(d)?;
                fs::write(Path::new(d).join(format!("{}.json", self.command)), self.to_json(config))
            }
            (Format::Csv, None) => {
                let parts = self.csv_parts();
                for (i, (_, text)) in parts.iter().enumerate() {
                    if i > 0 {
                        out.write_all(b"\n")?;
                    }
                    out.write_all(text.as_bytes())?;
                }
                Ok(())
            }
            (Format::Csv, Some(d)) => {
                fs::create_dir_all(d)?;
                for (suffix, text) in self.csv_parts() {
                    fs::write(Path::new(d).join(format!("{}{suffix}.csv", self.command)), text)?;
                }
                Ok(())
            }
        }
    }
}
