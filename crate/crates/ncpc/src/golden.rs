//! Long-format golden tables and cell-by-cell comparison.
//!
//! Golden CSV files have the header `table,country,column,value`; a value
//! of `-` means the cell is expected to be empty.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Value {
    Number(f64),
    /// No data, printed as `-`.
    Missing,
    /// The computation failed.
    Error,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(v) => write!(f, "{v}"),
            Value::Missing => f.write_str("-"),
            Value::Error => f.write_str("error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub table: String,
    pub country: String,
    pub column: String,
    pub value: Value,
}

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("golden csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("golden line {line}: bad value {value:?}")]
    Value { line: u64, value: String },
    #[error("cannot read golden directory {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub fn read_golden<R: Read>(reader: R) -> Result<Vec<Record>, GoldenError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let value = match &rec[3] {
            "-" => Value::Missing,
            "error" => Value::Error,
            v => Value::Number(v.parse().map_err(|_| GoldenError::Value {
                line,
                value: v.to_string(),
            })?),
        };
        out.push(Record {
            table: rec[0].to_string(),
            country: rec[1].to_string(),
            column: rec[2].to_string(),
            value,
        });
    }
    Ok(out)
}

pub fn write_golden<W: Write>(records: &[Record], writer: W) -> Result<(), GoldenError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["table", "country", "column", "value"])?;
    for r in records {
        w.write_record([&r.table, &r.country, &r.column, &r.value.to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Every `*.csv` file in `dir`, in file-name order.
pub fn load_golden_dir(dir: &Path) -> Result<Vec<Record>, GoldenError> {
    let io = |source| GoldenError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(read_golden(std::fs::File::open(&f).map_err(io)?)?);
    }
    Ok(out)
}

const PUBLISHED: [&str; 5] = [
    include_str!("../golden/a1-recessions.csv"),
    include_str!("../golden/a2-unitroot.csv"),
    include_str!("../golden/aggregates.csv"),
    include_str!("../golden/table1-overview.csv"),
    include_str!("../golden/table1-regression.csv"),
];

/// The published tables, as vendored with the crate.
pub fn published() -> Vec<Record> {
    PUBLISHED
        .iter()
        .flat_map(|s| read_golden(s.as_bytes()).expect("vendored golden files parse"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "bound", rename_all = "lowercase")]
pub enum Tolerance {
    Exact,
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn accepts(self, expected: f64, actual: f64) -> bool {
        match self {
            Tolerance::Exact => expected == actual,
            // Slack for the decimal representation of the bound itself.
            Tolerance::Absolute(b) => (actual - expected).abs() <= b * (1.0 + 1e-9),
            Tolerance::Relative(r) => (actual - expected).abs() <= r * expected.abs() * (1.0 + 1e-9),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Exact => f.write_str("exact"),
            Tolerance::Absolute(b) => write!(f, "±{b}"),
            Tolerance::Relative(r) => write!(f, "±{}%", r * 100.0),
        }
    }
}

/// Comparison rule for a golden cell.
pub fn tolerance(table: &str, column: &str) -> Tolerance {
    match table {
        "table1-overview" => Tolerance::Absolute(0.0005),
        "table1-regression" if column.ends_with("obs") => Tolerance::Exact,
        "table1-regression" if column.ends_with("_se") => Tolerance::Relative(0.30),
        "table1-regression" | "aggregates" => Tolerance::Absolute(0.02),
        "a2-unitroot" if column.ends_with("_p") => Tolerance::Absolute(0.02),
        _ => Tolerance::Exact,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellDiff {
    pub table: String,
    pub country: String,
    pub column: String,
    pub expected: Value,
    pub actual: Option<Value>,
    pub tolerance: Tolerance,
    pub pass: bool,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let actual = self.actual.map_or_else(|| "absent".to_string(), |v| v.to_string());
        write!(
            f,
            "{} {} {} {}: expected {} got {} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.table,
            self.country,
            self.column,
            self.expected,
            actual,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiffReport {
    pub cells: Vec<CellDiff>,
    /// Expected cells for (table, country) pairs the run did not produce.
    pub skipped: usize,
}

impl DiffReport {
    pub fn failures(&self) -> impl Iterator<Item = &CellDiff> {
        self.cells.iter().filter(|c| !c.pass)
    }

    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{} cells compared, {} passed, {} failed, {} skipped",
            self.cells.len(),
            self.cells.len() - failed,
            failed,
            self.skipped
        )
    }
}

/// Compares `actual` against `expected` cell by cell.
///
/// Expected cells whose (table, country) pair has no actual record at all
/// are skipped, so a run on a subset of countries is compared on that
/// subset only.
pub fn diff(expected: &[Record], actual: &[Record]) -> DiffReport {
    let mut index: BTreeMap<(&str, &str), BTreeMap<&str, Value>> = BTreeMap::new();
    for r in actual {
        index
            .entry((&r.table, &r.country))
            .or_default()
            .insert(&r.column, r.value);
    }
    let mut report = DiffReport::default();
    for e in expected {
        let Some(cols) = index.get(&(e.table.as_str(), e.country.as_str())) else {
            report.skipped += 1;
            continue;
        };
        let actual = cols.get(e.column.as_str()).copied();
        let tolerance = tolerance(&e.table, &e.column);
        let pass = match (e.value, actual) {
            (Value::Number(x), Some(Value::Number(y))) => tolerance.accepts(x, y),
            (Value::Missing, Some(Value::Missing)) => true,
            _ => false,
        };
        report.cells.push(CellDiff {
            table: e.table.clone(),
            country: e.country.clone(),
            column: e.column.clone(),
            expected: e.value,
            actual,
            tolerance,
            pass,
        });
    }
    report
}
