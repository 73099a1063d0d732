use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncpc_core::trend::GapMode;
use ncpc_core::unitroot::PpBandwidth;
use ncpc_core::{CountryCode, Window};

use ncpc::config::{Format, RunConfig, SpecSelection, DATA_ENV};
use ncpc::golden::{write_golden, Record};
use ncpc::ingest::{convert_wide, write_panel, ValidationReport};
use ncpc::pipeline::{self, PipelineError};
use ncpc::table::{render, Table};

#[derive(Parser)]
#[command(name = "ncpc", version, about = "Regime-dependent Phillips curves for a 41-country panel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Means and standard deviations of the model variables.
    Describe(Common),
    /// Phillips curve estimates and class aggregates.
    Estimate(Common),
    /// Recession quarter counts by decade.
    Recessions(Common),
    /// ADF and PP tests on inflation, expected inflation and the gap.
    Unitroot(Common),
    /// Every table, diffed against the golden tables.
    Replicate(Replicate),
    /// Builds a long panel file from four wide files.
    Convert(Convert),
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecArg {
    Backward,
    Forward,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum GapArg {
    Levels,
    Logs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    #[value(alias = "md")]
    Markdown,
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Long-format panel CSV.
    #[arg(long, env = DATA_ENV)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    spec: SpecArg,
    /// Restrict to these country codes (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    country: Vec<String>,
    #[arg(long, value_enum, default_value = "levels")]
    gap_mode: GapArg,
    /// Added before taking logs.
    #[arg(long, default_value_t = 1.0)]
    shift_const: f64,
    #[arg(long, default_value_t = 1600.0)]
    lambda: f64,
    /// Fixed HAC lag truncation instead of the automatic rule.
    #[arg(long)]
    hac_bandwidth: Option<usize>,
    /// Sample window, e.g. 1980Q1:2016Q1.
    #[arg(long, default_value = "1980Q1:2016Q1")]
    window: String,
    #[arg(long, value_enum, default_value = "markdown")]
    format: FormatArg,
    /// Write tables here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// PP bandwidth: rule, auto, or a number of lags.
    #[arg(long, default_value = "auto")]
    pp_bandwidth: String,
    /// Largest ADF lag considered.
    #[arg(long, default_value_t = ncpc_core::unitroot::DEFAULT_MAX_LAG)]
    max_lag: usize,
}

#[derive(Args)]
struct Replicate {
    #[command(flatten)]
    common: Common,
    /// Directory of golden CSV files to diff against (default: the published tables).
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Write the run's golden records to this directory, one file per table.
    #[arg(long)]
    emit_golden: Option<PathBuf>,
}

#[derive(Args)]
struct Convert {
    #[arg(long)]
    cpi: PathBuf,
    #[arg(long)]
    expected_cpi: PathBuf,
    #[arg(long)]
    unemployment: PathBuf,
    #[arg(long)]
    gdp: PathBuf,
    /// Output panel CSV (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn input_error(msg: impl std::fmt::Display) -> PipelineError {
    PipelineError::Config(ncpc::config::ConfigError(msg.to_string()))
}

fn parse_pp(s: &str) -> Result<PpBandwidth, PipelineError> {
    match s {
        "rule" => Ok(PpBandwidth::Rule),
        "auto" => Ok(PpBandwidth::NeweyWest1994),
        n => n
            .parse()
            .map(PpBandwidth::Manual)
            .map_err(|_| input_error(format!("pp bandwidth must be rule, auto or a number, got {n:?}"))),
    }
}

fn run_config(c: &Common) -> Result<RunConfig, PipelineError> {
    let mut cfg = RunConfig::new(&c.data);
    cfg.specs = match c.spec {
        SpecArg::Backward => SpecSelection::Backward,
        SpecArg::Forward => SpecSelection::Forward,
        SpecArg::Both => SpecSelection::Both,
    };
    if !c.country.is_empty() {
        let codes = c
            .country
            .iter()
            .map(|s| s.trim().to_ascii_uppercase().parse::<CountryCode>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(input_error)?;
        cfg.countries = Some(codes);
    }
    let t = &mut cfg.estimate.transform;
    t.gap_mode = match c.gap_mode {
        GapArg::Levels => GapMode::Levels,
        GapArg::Logs => GapMode::Logs,
    };
    t.shift = c.shift_const;
    t.lambda = c.lambda;
    t.window = c.window.parse::<Window>().map_err(input_error)?;
    cfg.estimate.hac_bandwidth = c.hac_bandwidth;
    cfg.format = match c.format {
        FormatArg::Markdown => Format::Markdown,
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    cfg.out = c.out.clone();
    cfg.jobs = c.jobs;
    cfg.pp_bandwidth = parse_pp(&c.pp_bandwidth)?;
    cfg.max_lag = c.max_lag;
    Ok(cfg)
}

fn report_validation(r: &ValidationReport) {
    for n in &r.notices {
        eprintln!("note: {}: {}", n.country, n.message);
    }
    for v in &r.violations {
        eprintln!(
            "warning: {} {} {} = {} ({})",
            v.country, v.quarter, v.column, v.value, v.rule
        );
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), PipelineError> {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| input_error(format!("cannot write output: {e}")))
}

fn emit_golden(dir: &Path, records: &[Record]) -> Result<(), PipelineError> {
    std::fs::create_dir_all(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    let mut by_table: BTreeMap<&str, Vec<Record>> = BTreeMap::new();
    for r in records {
        by_table.entry(&r.table).or_default().push(r.clone());
    }
    for (table, rs) in by_table {
        let path = dir.join(format!("{table}.csv"));
        let file = std::fs::File::create(&path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        write_golden(&rs, file)?;
    }
    Ok(())
}

fn tables_for(
    c: &Common,
    f: fn(&ncpc::ingest::Panel, &RunConfig) -> Vec<Table>,
) -> Result<ExitCode, PipelineError> {
    let cfg = run_config(c)?;
    let (panel, report) = pipeline::load(&cfg)?;
    report_validation(&report);
    write_out(cfg.out.as_deref(), &render(&f(&panel, &cfg), cfg.format))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Describe(c) => tables_for(&c, pipeline::cmd_describe),
        Command::Estimate(c) => tables_for(&c, pipeline::cmd_estimate),
        Command::Recessions(c) => tables_for(&c, pipeline::cmd_recessions),
        Command::Unitroot(c) => tables_for(&c, pipeline::cmd_unitroot),
        Command::Replicate(r) => {
            let mut cfg = run_config(&r.common)?;
            cfg.golden = r.golden;
            let (panel, report) = pipeline::load(&cfg)?;
            report_validation(&report);
            let rep = pipeline::cmd_replicate(&panel, &cfg)?;
            write_out(cfg.out.as_deref(), &render(&rep.tables, cfg.format))?;
            if let Some(dir) = &r.emit_golden {
                emit_golden(dir, &rep.records)?;
            }
            for f in rep.diff.failures() {
                eprintln!("{f}");
            }
            eprintln!("{}", rep.diff.summary());
            Ok(if rep.diff.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Convert(c) => {
            let panel = convert_wide([&c.cpi, &c.expected_cpi, &c.unemployment, &c.gdp].map(PathBuf::as_path))?;
            let mut buf = Vec::new();
            write_panel(&panel, &mut buf)?;
            write_out(c.out.as_deref(), &String::from_utf8(buf).expect("csv output is utf-8"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
