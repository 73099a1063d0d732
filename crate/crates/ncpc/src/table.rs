//! Result tables and their markdown, CSV and JSON renderings.

use std::fmt::Write as _;

use ncpc_core::estimate::Significance;
use serde::Serialize;

use crate::config::Format;
use crate::golden::{Record, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Number,
    Count,
    /// Coefficient with standard error and stars.
    Coef,
    /// Unit-root p-value with lag or bandwidth and sample size; the string
    /// names the parameter (`lag`, `bw`).
    Test(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub key: String,
    pub label: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn new(key: impl Into<String>, label: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            key: key.into(),
            label: label.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Cell {
    Number { value: f64 },
    Count { value: usize },
    Coef { value: f64, se: f64, stars: Significance },
    Test { p_value: f64, statistic: f64, param: usize, nobs: usize },
    /// No data for this cell.
    Missing,
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    /// Country code, or class letter for class-level rows.
    pub key: String,
    /// Market class letter.
    pub group: char,
    pub label: String,
    /// Prepended to column keys in golden records (`backward_`).
    pub record_prefix: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// Stable identifier, also the golden table name.
    pub name: String,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
}

fn stars_count(s: Significance) -> usize {
    s.stars().len()
}

impl Table {
    /// Golden records for every cell. Missing cells map to `-`.
    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (col, cell) in self.columns.iter().zip(&row.cells) {
                let key = format!("{}{}", row.record_prefix, col.key);
                let mut push = |column: String, value: Value| {
                    out.push(Record {
                        table: self.name.clone(),
                        country: row.key.clone(),
                        column,
                        value,
                    })
                };
                let err = |cell: &Cell| match cell {
                    Cell::Missing => Value::Missing,
                    _ => Value::Error,
                };
                match (col.kind, cell) {
                    (_, Cell::Number { value }) => push(key, Value::Number(*value)),
                    (_, Cell::Count { value }) => push(key, Value::Number(*value as f64)),
                    (_, Cell::Coef { value, se, .. }) => {
                        push(format!("{key}_se"), Value::Number(*se));
                        push(key, Value::Number(*value));
                    }
                    (ColumnKind::Test(param), Cell::Test { p_value, param: k, nobs, .. }) => {
                        push(format!("{key}_p"), Value::Number(*p_value));
                        push(format!("{key}_{param}"), Value::Number(*k as f64));
                        push(format!("{key}_n"), Value::Number(*nobs as f64));
                    }
                    (ColumnKind::Coef, c) => {
                        push(format!("{key}_se"), err(c));
                        push(key, err(c));
                    }
                    (ColumnKind::Test(param), c) => {
                        push(format!("{key}_p"), err(c));
                        push(format!("{key}_{param}"), err(c));
                        push(format!("{key}_n"), err(c));
                    }
                    (_, c) => push(key, err(c)),
                }
            }
        }
        out
    }
}

fn md_cell(cell: &Cell, kind: ColumnKind) -> String {
    match cell {
        Cell::Number { value } => format!("{value:.4}"),
        Cell::Count { value } => value.to_string(),
        Cell::Coef { value, se, stars } => format!("{value:.4}{stars} ({se:.4})"),
        Cell::Test { p_value, param, nobs, .. } => {
            let tag = match kind {
                ColumnKind::Test("lag") => "L",
                _ => "B",
            };
            format!("{p_value:.4} ({tag}:{param} N:{nobs})")
        }
        Cell::Missing => "-".into(),
        Cell::Error { .. } => "error".into(),
    }
}

pub fn render_markdown(tables: &[Table]) -> String {
    let mut s = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "## {}\n", t.title);
        s.push_str("| Class | Code | Name |");
        for c in &t.columns {
            let _ = write!(s, " {} |", c.label);
        }
        s.push_str("\n|---|---|---|");
        for _ in &t.columns {
            s.push_str("---:|");
        }
        s.push('\n');
        for r in &t.rows {
            let _ = write!(s, "| {} | {} | {} |", r.group, r.key, r.label);
            for (c, cell) in t.columns.iter().zip(&r.cells) {
                let _ = write!(s, " {} |", md_cell(cell, c.kind));
            }
            s.push('\n');
        }
        if !t.notes.is_empty() {
            s.push('\n');
            for n in &t.notes {
                let _ = writeln!(s, "- {n}");
            }
        }
    }
    s
}

fn csv_header(c: &Column) -> Vec<String> {
    match c.kind {
        ColumnKind::Number | ColumnKind::Count => vec![c.key.clone()],
        ColumnKind::Coef => vec![c.key.clone(), format!("{}_se", c.key), format!("{}_stars", c.key)],
        ColumnKind::Test(param) => vec![
            format!("{}_p", c.key),
            format!("{}_stat", c.key),
            format!("{}_{param}", c.key),
            format!("{}_n", c.key),
        ],
    }
}

fn csv_cells(cell: &Cell, width: usize) -> Vec<String> {
    match cell {
        Cell::Number { value } => vec![value.to_string()],
        Cell::Count { value } => vec![value.to_string()],
        Cell::Coef { value, se, stars } => vec![value.to_string(), se.to_string(), stars_count(*stars).to_string()],
        Cell::Test { p_value, statistic, param, nobs } => {
            vec![p_value.to_string(), statistic.to_string(), param.to_string(), nobs.to_string()]
        }
        Cell::Missing => vec![String::new(); width],
        Cell::Error { .. } => vec!["error".into(); width],
    }
}

/// One CSV block per table, separated by a blank line. Values keep full
/// precision.
pub fn render_csv(tables: &[Table]) -> String {
    let mut out = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push(b'\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["table".to_string(), "class".into(), "code".into(), "name".into()];
        header.extend(t.columns.iter().flat_map(csv_header));
        w.write_record(&header).expect("in-memory write");
        for r in &t.rows {
            let mut rec = vec![t.name.clone(), r.group.to_string(), r.key.clone(), r.label.clone()];
            for (c, cell) in t.columns.iter().zip(&r.cells) {
                rec.extend(csv_cells(cell, csv_header(c).len()));
            }
            w.write_record(&rec).expect("in-memory write");
        }
        out.extend(w.into_inner().expect("in-memory write"));
    }
    String::from_utf8(out).expect("utf-8 input")
}

pub fn render_json(tables: &[Table]) -> String {
    let mut s = serde_json::to_string_pretty(tables).expect("tables serialize");
    s.push('\n');
    s
}

pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Markdown => render_markdown(tables),
        Format::Csv => render_csv(tables),
        Format::Json => render_json(tables),
    }
}
