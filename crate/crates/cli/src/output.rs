//! Report envelope and JSON/CSV writers.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::error::CliResult;

pub const SCHEMA_ID: &str = "wehrl-report/1";

/// Rows for CSV output. Cells are already formatted; floats use Rust's
/// shortest round-trip form, which is locale independent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produces before it is written out.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub table: Table,
    /// False when a check or majorization test failed.
    pub passed: bool,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    config: &'a RunConfig,
    passed: bool,
    warnings: &'a [String],
    result: &'a Value,
}

pub fn to_json(config: &RunConfig, report: &Report) -> String {
    let envelope = Envelope {
        schema: SCHEMA_ID,
        config,
        passed: report.passed,
        warnings: &report.warnings,
        result: &report.result,
    };
    serde_json::to_string_pretty(&envelope).expect("reports serialize")
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

/// Write the report in the configured format. CSV has no room for the run
/// configuration, so it goes to `<output>.config.json` next to a file, or
/// to stderr as a `# config:` line when streaming to stdout.
pub fn emit(config: &RunConfig, report: &Report) -> CliResult<()> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let config_json = serde_json::to_string(config).expect("config serializes");
    match (config.format, &config.output) {
        (Format::Json, Some(path)) => {
            let mut f = File::create(path)?;
            writeln!(f, "{}", to_json(config, report))?;
        }
        (Format::Json, None) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            writeln!(lock, "{}", to_json(config, report))?;
        }
        (Format::Csv, Some(path)) => {
            write_csv(&report.table, File::create(path)?)?;
            std::fs::write(sidecar(path), config_json + "\n")?;
        }
        (Format::Csv, None) => {
            eprintln!("# config: {config_json}");
            write_csv(&report.table, io::stdout().lock())?;
        }
    }
    Ok(())
}

pub fn fmt(x: f64) -> String {
    format!("{x}")
}
