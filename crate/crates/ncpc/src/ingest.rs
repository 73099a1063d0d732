//! Panel CSV files.
//!
//! Canonical long format, one row per country and quarter:
//!
//! ```text
//! country,date,cpi,expected_cpi,unemployment,gdp
//! AU,1980Q1,25.1,25.3,0.061,101.2
//! ```
//!
//! Empty cells are missing values. Each country's rows must have strictly
//! increasing dates; quarters absent from the file become missing values.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use ncpc_core::{CountryCode, CountryDataset, Quarter, QuarterlySeries};
use thiserror::Error;

use crate::registry;

pub const HEADER: [&str; 6] = ["country", "date", "cpi", "expected_cpi", "unemployment", "gdp"];

const VALUE_COLUMNS: [&str; 4] = ["cpi", "expected_cpi", "unemployment", "gdp"];

/// Datasets keyed (and therefore ordered) by country code.
pub type Panel = BTreeMap<CountryCode, CountryDataset>;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },
    #[error("line {line}: unknown country code {code:?}")]
    UnknownCountry { line: u64, code: String },
    #[error("line {line}: {country} date {found} does not follow {previous}")]
    NonMonotonicDates {
        line: u64,
        country: CountryCode,
        previous: Quarter,
        found: Quarter,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] ncpc_core::Error),
}

type Row = [Option<f64>; 4];

fn parse_error(line: u64, column: &str, message: impl Into<String>) -> IngestError {
    IngestError::Parse {
        line,
        column: column.to_string(),
        message: message.into(),
    }
}

fn parse_value(cell: &str, line: u64, column: &str) -> Result<Option<f64>, IngestError> {
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(parse_error(line, column, format!("not a finite number: {cell:?}"))),
    }
}

fn parse_country(cell: &str, line: u64) -> Result<CountryCode, IngestError> {
    cell.parse::<CountryCode>()
        .ok()
        .filter(|c| registry::lookup(*c).is_some())
        .ok_or_else(|| IngestError::UnknownCountry {
            line,
            code: cell.to_string(),
        })
}

fn assemble(code: CountryCode, rows: &BTreeMap<Quarter, Row>) -> Result<CountryDataset, IngestError> {
    let entry = registry::lookup(code).expect("codes are checked on read");
    let (Some((&first, _)), Some((&last, _))) = (rows.first_key_value(), rows.last_key_value()) else {
        return Err(ncpc_core::Error::SeriesTooShort { needed: 1, got: 0 }.into());
    };
    let len = first.quarters_until(last) as usize + 1;
    let column = |k: usize| {
        let values = (0..len)
            .map(|t| rows.get(&first.offset(t as i64)).and_then(|r| r[k]))
            .collect();
        QuarterlySeries::new(code, VALUE_COLUMNS[k], first, values)
    };
    Ok(CountryDataset::new(
        code,
        entry.market_class,
        column(0)?,
        column(1)?,
        column(2)?,
        column(3)?,
    )?)
}

/// Reads a long-format panel.
pub fn read_panel<R: Read>(reader: R) -> Result<Panel, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(parse_error(
            1,
            "header",
            format!("expected {:?}, found {:?}", HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut by_country: BTreeMap<CountryCode, BTreeMap<Quarter, Row>> = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let country = parse_country(&record[0], line)?;
        let date: Quarter = record[1]
            .parse()
            .map_err(|_| parse_error(line, "date", format!("invalid quarter {:?}", &record[1])))?;
        let mut row = [None; 4];
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = parse_value(&record[k + 2], line, VALUE_COLUMNS[k])?;
        }
        let rows = by_country.entry(country).or_default();
        if let Some((&previous, _)) = rows.last_key_value() {
            if date <= previous {
                return Err(IngestError::NonMonotonicDates {
                    line,
                    country,
                    previous,
                    found: date,
                });
            }
        }
        rows.insert(date, row);
    }
    by_country
        .iter()
        .map(|(code, rows)| Ok((*code, assemble(*code, rows)?)))
        .collect()
}

/// Loads a long-format panel file.
pub fn load_panel(path: &Path) -> Result<Panel, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_panel(std::io::BufReader::new(file))
}

fn dataset_series(d: &CountryDataset) -> [&QuarterlySeries; 4] {
    [&d.cpi, &d.expected_cpi, &d.unemployment, &d.gdp]
}

/// Writes a panel in the long format, one row per quarter of each
/// country's span. Values use the shortest representation that parses
/// back to the same number.
pub fn write_panel<W: Write>(panel: &Panel, writer: W) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    for (code, d) in panel {
        let series = dataset_series(d);
        let first = series.iter().map(|s| s.start()).min().expect("four series");
        let last = series.iter().map(|s| s.end()).max().expect("four series");
        for t in 0..=first.quarters_until(last) {
            let q = first.offset(t);
            let mut record = vec![code.to_string(), q.to_string()];
            record.extend(series.iter().map(|s| s.get(q).map_or_else(String::new, |v| v.to_string())));
            w.write_record(&record)?;
        }
    }
    w.flush().map_err(|source| IngestError::Io {
        path: PathBuf::from("<output>"),
        source,
    })?;
    Ok(())
}

/// A normalization applied during validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Notice {
    pub country: CountryCode,
    pub message: String,
}

impl fmt::Display for Notice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.country, self.message)
    }
}

/// A value breaking a plausibility rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub country: CountryCode,
    pub quarter: Quarter,
    pub column: &'static str,
    pub value: f64,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} = {}: {}",
            self.country, self.quarter, self.column, self.value, self.rule
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub notices: Vec<Notice>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.notices.is_empty() && self.violations.is_empty()
    }
}

/// Unemployment above this is read as a percentage.
pub const PERCENT_THRESHOLD: f64 = 1.5;

/// Checks plausibility and normalizes unemployment to decimals.
///
/// A country whose unemployment exceeds [`PERCENT_THRESHOLD`] anywhere is
/// taken to be in percent and divided by 100. Non-positive CPI, expected
/// CPI or GDP, and unemployment outside `[0, 1]` after normalization, are
/// listed as violations and left in place.
pub fn validate_panel(mut panel: Panel) -> (Panel, ValidationReport) {
    let mut report = ValidationReport::default();
    for (code, d) in panel.iter_mut() {
        let max_u = d.unemployment.present().fold(f64::NEG_INFINITY, f64::max);
        if max_u > PERCENT_THRESHOLD {
            d.unemployment = d.unemployment.map(|v| v / 100.0);
            report.notices.push(Notice {
                country: *code,
                message: format!("unemployment read as percent (max {max_u}), divided by 100"),
            });
        }
        let checks: [(&QuarterlySeries, &'static str, fn(f64) -> bool, &'static str); 4] = [
            (&d.cpi, "cpi", |v| v > 0.0, "CPI must be positive"),
            (&d.expected_cpi, "expected_cpi", |v| v > 0.0, "expected CPI must be positive"),
            (&d.unemployment, "unemployment", |v| (0.0..=1.0).contains(&v), "unemployment rate outside [0, 1]"),
            (&d.gdp, "gdp", |v| v > 0.0, "GDP must be positive"),
        ];
        for (series, column, ok, rule) in checks {
            for (quarter, v) in series.iter() {
                if let Some(value) = v.filter(|v| !ok(*v)) {
                    report.violations.push(Violation {
                        country: *code,
                        quarter,
                        column,
                        value,
                        rule,
                    });
                }
            }
        }
    }
    (panel, report)
}

/// Parses `1980Q1`, `1980 Q1`, `1980-Q1`, `Q1 1980` or `Q1-1980`.
pub fn parse_flexible_quarter(s: &str) -> Option<Quarter> {
    let s = s.trim();
    let (year, quarter) = if let Some(rest) = s.strip_prefix('Q') {
        let (qn, y) = rest.split_at(1.min(rest.len()));
        (y.trim_start_matches([' ', '-', ':', '/']), qn)
    } else {
        let (y, rest) = s.split_at(4.min(s.len()));
        (y, rest.trim_start_matches([' ', '-', ':', '/']).strip_prefix('Q')?)
    };
    if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Quarter::new(year.parse().ok()?, quarter.parse().ok()?).ok()
}

type Wide = BTreeMap<CountryCode, BTreeMap<Quarter, f64>>;

/// Reads a wide file: first column a quarter, one column per country code.
pub fn read_wide<R: Read>(reader: R) -> Result<Wide, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    let codes: Vec<CountryCode> = header
        .iter()
        .skip(1)
        .map(|c| parse_country(c, 1))
        .collect::<Result<_, _>>()?;
    let mut out: Wide = codes.iter().map(|c| (*c, BTreeMap::new())).collect();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let q = parse_flexible_quarter(&record[0])
            .ok_or_else(|| parse_error(line, &header[0], format!("invalid quarter {:?}", &record[0])))?;
        for (k, code) in codes.iter().enumerate() {
            if let Some(v) = parse_value(record.get(k + 1).unwrap_or(""), line, &header[k + 1])? {
                if out.get_mut(code).expect("seeded").insert(q, v).is_some() {
                    return Err(parse_error(line, &header[0], format!("duplicate quarter {q}")));
                }
            }
        }
    }
    Ok(out)
}

/// Merges four wide files (CPI, expected CPI, unemployment, GDP) into a
/// panel. A country missing from a file gets an all-missing series.
pub fn panel_from_wide(parts: [&Wide; 4]) -> Result<Panel, IngestError> {
    let mut rows: BTreeMap<CountryCode, BTreeMap<Quarter, Row>> = BTreeMap::new();
    for (k, part) in parts.iter().enumerate() {
        for (code, values) in part.iter() {
            let country = rows.entry(*code).or_default();
            for (q, v) in values {
                country.entry(*q).or_insert([None; 4])[k] = Some(*v);
            }
        }
    }
    rows.iter()
        .filter(|(_, r)| !r.is_empty())
        .map(|(code, r)| Ok((*code, assemble(*code, r)?)))
        .collect()
}

/// Reads four wide files into a panel.
pub fn convert_wide(paths: [&Path; 4]) -> Result<Panel, IngestError> {
    let mut parts = Vec::with_capacity(4);
    for path in paths {
        let file = File::open(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parts.push(read_wide(std::io::BufReader::new(file))?);
    }
    panel_from_wide([&parts[0], &parts[1], &parts[2], &parts[3]])
}
