//! Row-oriented output shared by the CSV and JSON writers.

use std::io::{self, Write};

use serde_json::{Map, Value};
use vc_twist_core::io::{fmt_f64, write_header};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // round-trip through the CSV text so both formats carry the same digits
            Cell::Num(x) if x.is_finite() => fmt_f64(*x).parse::<f64>().map_or(Value::Null, Value::from),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i32> for Cell {
    fn from(n: i32) -> Self {
        Cell::Int(n.into())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<Option<i32>> for Cell {
    fn from(x: Option<i32>) -> Self {
        x.map_or(Cell::Empty, Cell::from)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalar results reported next to the config echo.
    pub notes: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn write_table<W: Write>(out: &mut W, config: &RunConfig, table: &Table, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, config, table),
        Format::Json => write_json(out, config, table),
    }
}

fn write_csv<W: Write>(out: &mut W, config: &RunConfig, table: &Table) -> io::Result<()> {
    let mut header = config.header();
    header.extend(table.notes.iter().map(|(k, v)| format!("result.{k} = {}", v.csv())));
    write_header(out, &header)?;
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_json<W: Write>(out: &mut W, config: &RunConfig, table: &Table) -> io::Result<()> {
    let cfg: Map<String, Value> = config.entries().map(|(k, v)| (k.to_string(), Value::from(v))).collect();
    let notes: Map<String, Value> = table.notes.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| Value::Object(table.columns.iter().zip(row).map(|(c, v)| (c.clone(), v.json())).collect()))
        .collect();
    let mut doc = Map::new();
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    doc.insert("command".into(), config.command.into());
    doc.insert("config".into(), Value::Object(cfg));
    if !notes.is_empty() {
        doc.insert("result".into(), Value::Object(notes));
    }
    doc.insert("rows".into(), Value::Array(rows));
    serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
    writeln!(out)
}
