// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Rendering of command results as JSON, CSV or an aligned text table.
//! Value cells always hold exact fractions; `--decimals` only adds columns.

use clap::ValueEnum;
use serde_json::Value;

use sdslab::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Rows of a tabular view: a header and string cells.
pub struct Rows {
    pub header: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

impl Rows {
    pub fn new<const K: usize>(header: [&str; K]) -> Rows {
        Rows { header: header.iter().map(|h| h.to_string()).collect(), cells: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.cells.push(row);
    }

    /// `field,value` rows for every leaf of a JSON document.
    pub fn flatten(value: &Value) -> Rows {
        fn walk(prefix: &str, value: &Value, out: &mut Rows) {
            let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
            match value {
                Value::Object(map) => map.iter().for_each(|(k, v)| walk(&join(k), v, out)),
                Value::Array(items) => items.iter().enumerate().for_each(|(k, v)| walk(&join(&k.to_string()), v, out)),
                Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
                Value::Null => out.push(vec![prefix.to_string(), String::new()]),
                other => out.push(vec![prefix.to_string(), other.to_string()]),
            }
        }
        let mut rows = Rows::new(["field", "value"]);
        walk("", value, &mut rows);
        rows
    }

    /// Adds a decimal column after every column that holds fractions.
    fn with_decimals(self, digits: usize) -> Rows {
        let fraction = |cell: &str| cell.contains('/').then(|| cell.parse::<Rational>().ok()).flatten();
        let fractional: Vec<bool> =
            (0..self.header.len()).map(|c| self.cells.iter().any(|row| fraction(&row[c]).is_some())).collect();
        let mut header = Vec::new();
        for (c, h) in self.header.iter().enumerate() {
            header.push(h.clone());
            if fractional[c] {
                header.push(format!("{h}_decimal"));
            }
        }
        let cells = self
            .cells
            .iter()
            .map(|row| {
                let mut out = Vec::new();
                for (c, cell) in row.iter().enumerate() {
                    out.push(cell.clone());
                    if fractional[c] {
                        let exact = fraction(cell).or_else(|| cell.parse::<Rational>().ok());
                        out.push(exact.map(|v| v.to_decimal_string(digits)).unwrap_or_default());
                    }
                }
                out
            })
            .collect();
        Rows { header, cells }
    }

    fn to_csv(&self) -> String {
        let escape = |cell: &String| {
            if cell.contains([',', '"', '\n']) {
                format!("\"{}\"", cell.replace('"', "\"\""))
            } else {
                cell.clone()
            }
        };
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.cells) {
            out.push_str(&row.iter().map(escape).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn to_table(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| std::iter::once(&self.header).chain(&self.cells).map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.cells) {
            let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// A command result: the JSON document plus an optional tabular view used by
/// the CSV and table formats (otherwise the JSON is flattened).
pub struct Report {
    pub json: Value,
    pub rows: Option<Rows>,
    /// Print the JSON on one line.
    pub compact: bool,
}

impl Report {
    pub fn new(json: Value) -> Report {
        Report { json, rows: None, compact: false }
    }

    pub fn with_rows(mut self, rows: Rows) -> Report {
        self.rows = Some(rows);
        self
    }

    pub fn render(self, format: Format, decimals: Option<usize>) -> String {
        let rows = || {
            let rows = self.rows.unwrap_or_else(|| Rows::flatten(&self.json));
            match decimals {
                Some(d) => rows.with_decimals(d),
                None => rows,
            }
        };
        match format {
            Format::Json if self.compact => format!("{}\n", self.json),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json renders")),
            Format::Csv => rows().to_csv(),
            Format::Table => rows().to_table(),
        }
    }
}
