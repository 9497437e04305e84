//! Tabular output: UTF-8 CSV with a header row, or a JSON object carrying
//! the column list and one named array per column. Numbers are written with
//! nine significant digits so emitted files re-parse into exactly the values
//! they display; identical configurations produce byte-identical files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(value: f64) -> Self {
        Cell::Number(value)
    }
}

impl From<&str> for Cell {
    fn from(value: &str) -> Self {
        Cell::Text(value.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Nine significant digits, scientific; the documented file precision.
pub fn fmt_sig9(value: f64) -> String {
    format!("{value:.8e}")
}

/// The value a nine-digit cell stands for once re-parsed.
pub fn rounded_sig9(value: f64) -> f64 {
    fmt_sig9(value).parse().expect("formatted float re-parses")
}

fn to_csv(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Number(x) => fmt_sig9(*x),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonTable {
    columns: Vec<String>,
    arrays: Vec<JsonColumn>,
}

#[derive(Serialize)]
struct JsonColumn {
    name: String,
    values: Vec<serde_json::Value>,
}

fn to_json(table: &Table) -> Result<String> {
    let arrays = table
        .columns
        .iter()
        .enumerate()
        .map(|(i, name)| JsonColumn {
            name: name.clone(),
            values: table
                .rows
                .iter()
                .map(|row| match &row[i] {
                    Cell::Number(x) => serde_json::Number::from_f64(rounded_sig9(*x))
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|| serde_json::Value::String(fmt_sig9(*x))),
                    Cell::Text(s) => serde_json::Value::String(s.clone()),
                })
                .collect(),
        })
        .collect();
    let doc = JsonTable {
        columns: table.columns.clone(),
        arrays,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn write_table(path: &Path, format: OutputFormat, table: &Table) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => to_csv(table),
        OutputFormat::Json => {
            let mut body = to_json(table)?;
            body.push('\n');
            body
        }
    };
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
