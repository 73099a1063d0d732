//! The replication commands.
//!
//! Per-country work runs on a bounded pool of scoped threads; results are
//! merged back in input order, so output never depends on the job count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ncpc_core::estimate::{
    aggregate_fractions_by, estimate_country, Coef, Coefficient, CountryReport, Regime, Selection,
    SignificanceFilter, Spec,
};
use ncpc_core::regime::{count_recessions, recession_dummy_with};
use ncpc_core::series::{describe, inflation_proxy, Summary};
use ncpc_core::trend::{hp_filter, unemployment_gap};
use ncpc_core::unitroot::{adf, pp_with, UnitRootResult};
use ncpc_core::{CountryCode, CountryDataset, MarketClass, QuarterlySeries, Window};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::golden::{self, DiffReport, GoldenError, Record, Value};
use crate::ingest::{load_panel, validate_panel, IngestError, Panel, ValidationReport};
use crate::registry;
use crate::table::{Cell, Column, ColumnKind, Table, TableRow};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Golden(#[from] GoldenError),
    #[error("country {0} is not in the panel")]
    CountryNotInPanel(CountryCode),
}

/// Applies `f` to every item on up to `jobs` threads and returns the
/// results in item order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// Loads, validates and filters the panel named by `cfg`.
pub fn load(cfg: &RunConfig) -> Result<(Panel, ValidationReport), PipelineError> {
    cfg.validate()?;
    let (panel, report) = validate_panel(load_panel(&cfg.data)?);
    Ok((select(panel, cfg)?, report))
}

/// Restricts a panel to the configured countries.
pub fn select(mut panel: Panel, cfg: &RunConfig) -> Result<Panel, PipelineError> {
    let Some(codes) = &cfg.countries else {
        return Ok(panel);
    };
    let mut out = Panel::new();
    for c in codes {
        let d = panel.remove(c).ok_or(PipelineError::CountryNotInPanel(*c))?;
        out.insert(*c, d);
    }
    Ok(out)
}

/// Datasets in table order: market class, then code.
fn ordered(panel: &Panel) -> Vec<&CountryDataset> {
    let mut v: Vec<&CountryDataset> = panel.values().collect();
    v.sort_by_key(|d| (d.market_class, d.code));
    v
}

fn name_of(code: CountryCode) -> String {
    registry::lookup(code).map_or_else(|| code.to_string(), |e| e.name.to_string())
}

fn row(d: &CountryDataset, record_prefix: &str, label: String, cells: Vec<Cell>) -> TableRow {
    TableRow {
        key: d.code.to_string(),
        group: d.market_class.letter(),
        label,
        record_prefix: record_prefix.to_string(),
        cells,
    }
}

fn error_cell(e: impl std::fmt::Display) -> Cell {
    Cell::Error {
        message: e.to_string(),
    }
}

/// Notes listing every error cell of the table.
fn error_notes(t: &mut Table) {
    for r in &t.rows {
        for (c, cell) in t.columns.iter().zip(&r.cells) {
            if let Cell::Error { message } = cell {
                t.notes.push(format!("{} {}{}: {message}", r.key, r.record_prefix, c.key));
            }
        }
    }
}

fn summary_cells(s: ncpc_core::Result<Summary>) -> [Cell; 2] {
    match s {
        Ok(s) => [Cell::Number { value: s.mean }, Cell::Number { value: s.stddev }],
        Err(e) => [error_cell(&e), error_cell(&e)],
    }
}

fn describe_country(d: &CountryDataset, cfg: &RunConfig) -> Vec<Cell> {
    let t = &cfg.estimate.transform;
    let w = t.window;
    let infl = inflation_proxy(&d.cpi, t.shift).and_then(|s| s.restrict(w));
    let expected = inflation_proxy(&d.expected_cpi, t.shift).and_then(|s| s.restrict(w));
    let trend = infl.clone().and_then(|s| hp_filter(&s, t.lambda)).map(|h| h.trend);
    let u = d.unemployment.restrict(w);
    let nairu = u.clone().and_then(|s| hp_filter(&s, t.lambda)).map(|h| h.trend);
    let gap = u.clone().and_then(|s| unemployment_gap(&s, t.gap_mode, t.shift, t.lambda));
    [infl, expected, trend, u, nairu, gap]
        .into_iter()
        .flat_map(|s| summary_cells(s.and_then(|s| describe(&s))))
        .collect()
}

pub fn cmd_describe(panel: &Panel, cfg: &RunConfig) -> Vec<Table> {
    let ds = ordered(panel);
    let cells = par_map(&ds, cfg.jobs, |d| describe_country(d, cfg));
    let vars = [
        ("infl", "Inflation"),
        ("exp_infl", "Expected inflation"),
        ("hp_trend", "HP inflation trend"),
        ("unemp", "Unemployment"),
        ("nairu", "NAIRU"),
        ("gap", "Unemployment gap"),
    ];
    let columns = vars
        .iter()
        .flat_map(|(k, l)| {
            [
                Column::new(format!("{k}_mean"), format!("{l} mean"), ColumnKind::Number),
                Column::new(format!("{k}_sd"), format!("{l} sd"), ColumnKind::Number),
            ]
        })
        .collect();
    let mut t = Table {
        name: "table1-overview".into(),
        title: format!(
            "Mean and standard deviation, {} (lambda {})",
            cfg.estimate.transform.window, cfg.estimate.transform.lambda
        ),
        columns,
        rows: ds.iter().zip(cells).map(|(d, c)| row(d, "", name_of(d.code), c)).collect(),
        notes: vec![],
    };
    error_notes(&mut t);
    vec![t]
}

fn coef_cell(c: Option<&Coef>) -> Cell {
    match c {
        Some(c) => Cell::Coef {
            value: c.value,
            se: c.se,
            stars: c.stars,
        },
        None => Cell::Missing,
    }
}

const ESTIMATE_KEYS: [(&str, &str); 6] = [
    ("tranquil_infl", "N infl"),
    ("tranquil_gap", "N gap"),
    ("recession_infl", "R infl"),
    ("recession_gap", "R gap"),
    ("constant", "C"),
    ("obs", "Obs"),
];

fn report_cells(r: &ncpc_core::Result<CountryReport>) -> Vec<Cell> {
    match r {
        Ok(r) => vec![
            coef_cell(Some(&r.tranquil_infl)),
            coef_cell(Some(&r.tranquil_gap)),
            coef_cell(r.recession_infl.as_ref()),
            coef_cell(r.recession_gap.as_ref()),
            coef_cell(Some(&r.constant)),
            Cell::Count { value: r.obs },
        ],
        Err(e) => (0..ESTIMATE_KEYS.len()).map(|_| error_cell(e)).collect(),
    }
}

/// Per-country, per-spec estimates in table order.
pub fn estimate_all<'a>(panel: &'a Panel, cfg: &RunConfig) -> Vec<(&'a CountryDataset, Spec, ncpc_core::Result<CountryReport>)> {
    let jobs: Vec<(&CountryDataset, Spec)> = ordered(panel)
        .into_iter()
        .flat_map(|d| cfg.specs.specs().iter().map(move |s| (d, *s)))
        .collect();
    let results = par_map(&jobs, cfg.jobs, |(d, s)| estimate_country(d, *s, &cfg.estimate));
    jobs.into_iter().zip(results).map(|((d, s), r)| (d, s, r)).collect()
}

/// Class averages of the significant coefficients, Turkey counted as
/// emerging.
pub fn aggregates_table(reports: &[CountryReport], specs: &[Spec]) -> Table {
    let mut columns = Vec::new();
    let mut selections = Vec::new();
    for coefficient in [Coefficient::Inflation, Coefficient::Gap] {
        for &spec in specs {
            for regime in [Regime::Tranquil, Regime::Recession] {
                let r = match regime {
                    Regime::Tranquil => "tranquil",
                    Regime::Recession => "recession",
                };
                let c = match coefficient {
                    Coefficient::Inflation => "infl",
                    _ => "gap",
                };
                columns.push(Column::new(
                    format!("{spec}_{r}_{c}"),
                    format!("{spec} {r} {c}"),
                    ColumnKind::Number,
                ));
                selections.push((spec, regime, coefficient));
            }
        }
    }
    let rows = MarketClass::ALL
        .iter()
        .map(|&class| TableRow {
            key: class.letter().to_string(),
            group: class.letter(),
            label: format!("{class:?}"),
            record_prefix: String::new(),
            cells: selections
                .iter()
                .map(|&(spec, regime, coefficient)| {
                    let sel = Selection {
                        class,
                        spec,
                        regime,
                        coefficient,
                        filter: SignificanceFilter::Significant,
                    };
                    match aggregate_fractions_by(reports, &sel, |r| registry::aggregation_class(r.country, r.market_class)) {
                        Ok(v) => Cell::Number { value: v },
                        Err(_) => Cell::Missing,
                    }
                })
                .collect(),
        })
        .collect();
    Table {
        name: "aggregates".into(),
        title: "Average significant coefficients by market class".into(),
        columns,
        rows,
        notes: vec!["Means over coefficients significant at 10% or better; TK grouped with emerging markets.".into()],
    }
}

pub fn cmd_estimate(panel: &Panel, cfg: &RunConfig) -> Vec<Table> {
    let results = estimate_all(panel, cfg);
    let columns = ESTIMATE_KEYS
        .iter()
        .map(|(k, l)| {
            let kind = if *k == "obs" { ColumnKind::Count } else { ColumnKind::Coef };
            Column::new(*k, *l, kind)
        })
        .collect();
    let rows = results
        .iter()
        .map(|(d, s, r)| row(d, &format!("{s}_"), format!("{} ({s})", name_of(d.code)), report_cells(r)))
        .collect();
    let mut t = Table {
        name: "table1-regression".into(),
        title: format!(
            "Phillips curve with recession interactions, {}",
            cfg.estimate.transform.window
        ),
        columns,
        rows,
        notes: vec![],
    };
    error_notes(&mut t);
    let reports: Vec<CountryReport> = results.into_iter().filter_map(|(_, _, r)| r.ok()).collect();
    vec![t, aggregates_table(&reports, cfg.specs.specs())]
}

/// Windows of the recession-count table.
pub fn recession_windows() -> [Window; 5] {
    ["1980Q1:1989Q4", "1990Q1:1999Q4", "1980Q1:2016Q1", "1990Q1:2016Q1", "2000Q1:2016Q1"]
        .map(|w| w.parse().expect("valid window literal"))
}

fn recession_cells(d: &CountryDataset, cfg: &RunConfig) -> Vec<Cell> {
    match recession_dummy_with(&d.gdp, cfg.estimate.recession_rule) {
        Ok(r) => recession_windows()
            .iter()
            .map(|w| {
                if r.defined_in(*w) == 0 {
                    Cell::Missing
                } else {
                    Cell::Count {
                        value: count_recessions(&r, *w),
                    }
                }
            })
            .collect(),
        Err(e) => recession_windows().iter().map(|_| error_cell(&e)).collect(),
    }
}

pub fn cmd_recessions(panel: &Panel, cfg: &RunConfig) -> Vec<Table> {
    let ds = ordered(panel);
    let cells = par_map(&ds, cfg.jobs, |d| recession_cells(d, cfg));
    let columns = recession_windows()
        .iter()
        .map(|w| Column::new(w.to_string(), format!("{}-{}", w.start.year(), w.end.year()), ColumnKind::Count))
        .collect();
    let mut t = Table {
        name: "a1-recessions".into(),
        title: "Recession quarters (GDP not growing)".into(),
        columns,
        rows: ds.iter().zip(cells).map(|(d, c)| row(d, "", name_of(d.code), c)).collect(),
        notes: vec![],
    };
    error_notes(&mut t);
    vec![t]
}

fn test_cell(r: ncpc_core::Result<UnitRootResult>) -> Cell {
    match r {
        Ok(r) => Cell::Test {
            p_value: r.p_value,
            statistic: r.statistic,
            param: r.lags_or_bandwidth,
            nobs: r.nobs,
        },
        Err(e) => error_cell(e),
    }
}

/// Inflation, expected inflation and the unemployment gap inside the window.
fn unit_root_inputs(d: &CountryDataset, cfg: &RunConfig) -> [ncpc_core::Result<QuarterlySeries>; 3] {
    let t = &cfg.estimate.transform;
    [
        inflation_proxy(&d.cpi, t.shift).and_then(|s| s.restrict(t.window)),
        inflation_proxy(&d.expected_cpi, t.shift).and_then(|s| s.restrict(t.window)),
        d.unemployment
            .restrict(t.window)
            .and_then(|u| unemployment_gap(&u, t.gap_mode, t.shift, t.lambda)),
    ]
}

fn unit_root_cells(d: &CountryDataset, cfg: &RunConfig) -> Vec<Cell> {
    let inputs = unit_root_inputs(d, cfg);
    let adf_cells = inputs
        .iter()
        .map(|s| test_cell(s.clone().and_then(|s| adf(&s, cfg.max_lag))));
    let pp_cells = inputs
        .iter()
        .map(|s| test_cell(s.clone().and_then(|s| pp_with(&s, cfg.pp_bandwidth))));
    adf_cells.chain(pp_cells).collect()
}

pub fn cmd_unitroot(panel: &Panel, cfg: &RunConfig) -> Vec<Table> {
    let ds = ordered(panel);
    let cells = par_map(&ds, cfg.jobs, |d| unit_root_cells(d, cfg));
    let mut columns = Vec::new();
    for (test, param) in [("adf", "lag"), ("pp", "bw")] {
        for (k, l) in [("infl", "inflation"), ("exp_infl", "expected inflation"), ("gap", "gap")] {
            columns.push(Column::new(
                format!("{test}_{k}"),
                format!("{} {l}", test.to_uppercase()),
                ColumnKind::Test(param),
            ));
        }
    }
    let mut t = Table {
        name: "a2-unitroot".into(),
        title: "Unit-root tests with intercept (p-values)".into(),
        columns,
        rows: ds.iter().zip(cells).map(|(d, c)| row(d, "", name_of(d.code), c)).collect(),
        notes: vec![],
    };
    error_notes(&mut t);
    vec![t]
}

/// Every table of the replication, in a fixed order.
pub fn all_tables(panel: &Panel, cfg: &RunConfig) -> Vec<Table> {
    let mut v = cmd_describe(panel, cfg);
    v.extend(cmd_estimate(panel, cfg));
    v.extend(cmd_recessions(panel, cfg));
    v.extend(cmd_unitroot(panel, cfg));
    v
}

/// Golden records of `tables`. The regression table also gets one `obs`
/// record per country, the largest sample over the specifications run.
pub fn records(tables: &[Table]) -> Vec<Record> {
    let mut out: Vec<Record> = tables.iter().flat_map(Table::records).collect();
    let mut obs: BTreeMap<String, f64> = BTreeMap::new();
    for r in &out {
        if r.table == "table1-regression" && r.column.ends_with("_obs") {
            if let Value::Number(v) = r.value {
                let e = obs.entry(r.country.clone()).or_insert(v);
                *e = e.max(v);
            }
        }
    }
    out.extend(obs.into_iter().map(|(country, v)| Record {
        table: "table1-regression".into(),
        country,
        column: "obs".into(),
        value: Value::Number(v),
    }));
    out
}

pub struct Replication {
    pub tables: Vec<Table>,
    pub records: Vec<Record>,
    pub diff: DiffReport,
}

/// Runs every command and compares with the golden tables (`cfg.golden`,
/// or the published ones).
pub fn cmd_replicate(panel: &Panel, cfg: &RunConfig) -> Result<Replication, PipelineError> {
    let expected = match &cfg.golden {
        Some(dir) => golden::load_golden_dir(dir)?,
        None => golden::published(),
    };
    let tables = all_tables(panel, cfg);
    let records = records(&tables);
    let diff = golden::diff(&expected, &records);
    Ok(Replication { tables, records, diff })
}
