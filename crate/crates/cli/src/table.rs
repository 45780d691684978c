//! A small column-oriented table and its CSV, Markdown and JSON-lines renderers.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    /// An input value echoed back; printed in shortest form, not rounded.
    Exact(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    /// Header shown in CSV and Markdown.
    pub header: &'static str,
    /// Key used in JSON lines.
    pub key: &'static str,
}

pub const fn col(header: &'static str, key: &'static str) -> Column {
    Column { header, key }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

/// Fixed-point text with `precision` decimals; never prints "-0.000".
pub fn format_number(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Cell {
    fn text(&self, precision: usize) -> String {
        match self {
            Cell::Num(x) => format_number(*x, precision),
            Cell::Exact(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Cell::Num(x) => format_number(*x, precision)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Exact(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Missing => Value::Null,
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Num(_) | Cell::Exact(_) | Cell::Int(_))
    }
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: usize) -> Result<String, CliError> {
        match format {
            Format::Csv => self.csv(precision),
            Format::Markdown => Ok(self.markdown(precision)),
            Format::Jsonl => self.jsonl(precision),
        }
    }

    fn csv(&self, precision: usize) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.header))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.text(precision)))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn markdown(&self, precision: usize) -> String {
        let mut out = String::new();
        let headers: Vec<&str> = self.columns.iter().map(|c| c.header).collect();
        let _ = writeln!(out, "| {} |", headers.join(" | "));
        let align: Vec<&str> = (0..self.columns.len())
            .map(|j| {
                let numeric = self.rows.first().is_some_and(|r| r[j].is_numeric());
                if numeric {
                    "---:"
                } else {
                    "---"
                }
            })
            .collect();
        let _ = writeln!(out, "|{}|", align.join("|"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.text(precision)).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }

    fn jsonl(&self, precision: usize) -> Result<String, CliError> {
        let mut out = String::new();
        for row in &self.rows {
            let mut obj = Map::new();
            for (column, cell) in self.columns.iter().zip(row) {
                obj.insert(column.key.to_string(), cell.json(precision));
            }
            out.push_str(&serde_json::to_string(&Value::Object(obj))?);
            out.push('\n');
        }
        Ok(out)
    }
}
