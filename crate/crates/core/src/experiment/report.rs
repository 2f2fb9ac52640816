use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::io::{format_sig, SIGNIFICANT_DIGITS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(v) => v as f64,
            Cell::UInt(v) => v as f64,
            Cell::Float(v) => v,
            Cell::Bool(v) => f64::from(u8::from(v)),
        }
    }

    fn to_csv(self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_sig(v, SIGNIFICANT_DIGITS),
            Cell::Bool(v) => u8::from(v).to_string(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Cell::Int(v) => s.serialize_i64(v),
            Cell::UInt(v) => s.serialize_u64(v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(v),
            Cell::Float(_) => s.serialize_none(),
            Cell::Bool(v) => s.serialize_bool(v),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Named statistics of one trial, in column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialRow {
    cells: Vec<(&'static str, Cell)>,
}

impl TrialRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &'static str, value: impl Into<Cell>) -> Self {
        self.cells.push((name, value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<Cell> {
        self.cells.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn f64(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("row has no column {name:?}"))
            .as_f64()
    }

    pub fn columns(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.cells.iter().map(|(k, _)| *k)
    }
}

impl Serialize for TrialRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.cells.len()))?;
        for (k, v) in &self.cells {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatSummary {
    pub name: String,
    pub mean: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl StatSummary {
    pub fn of(name: &str, values: &[f64]) -> Self {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        v.sort_by(f64::total_cmp);
        let mean = if v.is_empty() {
            f64::NAN
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        };
        Self {
            name: name.to_string(),
            mean,
            min: quantile(&v, 0.0),
            q25: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q75: quantile(&v, 0.75),
            max: quantile(&v, 1.0),
        }
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let pos = q * (len - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    /// Human-readable condition, e.g. `"<= 0.15"`.
    pub requirement: String,
    pub passed: bool,
    /// Set when a criterion is reported but not enforced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Criterion {
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!(">= {threshold}"),
            passed: value >= threshold,
            note: None,
        }
    }

    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("<= {threshold}"),
            passed: value <= threshold,
            note: None,
        }
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&value),
            note: None,
        }
    }

    /// Marks the criterion informational: it always passes, `note` says why.
    pub fn informational(mut self, note: &str) -> Self {
        self.note = Some(format!(
            "{note} (raw outcome: {})",
            if self.passed { "pass" } else { "fail" }
        ));
        self.passed = true;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub tool_version: String,
    pub config: ExperimentConfig,
    /// Column order of the CSV file.
    pub csv_columns: Vec<&'static str>,
    pub rows: Vec<TrialRow>,
    pub statistics: Vec<StatSummary>,
    pub criteria: Vec<Criterion>,
    /// Experiment-specific aggregates (e.g. fitted slopes).
    pub extras: serde_json::Map<String, serde_json::Value>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        self.rows.iter().map(|r| r.f64(name)).collect()
    }

    /// CSV body: header plus one line per trial row, numbers at 12 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.csv_columns).map_err(csv_err)?;
        for row in &self.rows {
            let record: Vec<String> = self
                .csv_columns
                .iter()
                .map(|c| row.get(c).map(Cell::to_csv).unwrap_or_default())
                .collect();
            w.write_record(&record).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// JSON document with the summary, the rows and a metadata block. Only the
    /// metadata block depends on the clock.
    pub fn to_json(&self) -> String {
        let generated = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let doc = serde_json::json!({
            "experiment": self.experiment,
            "tool_version": self.tool_version,
            "config": self.config,
            "summary": {
                "passed": self.passed(),
                "criteria": self.criteria,
                "statistics": self.statistics,
                "extras": self.extras,
            },
            "csv_columns": self.csv_columns,
            "rows": self.rows,
            "metadata": { "generated_unix_seconds": generated },
        });
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Writes `<experiment>.csv` or `<experiment>.json` into `dir`.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (path, body) = match format {
        ReportFormat::Csv => (
            dir.join(format!("{}.csv", report.experiment)),
            report.to_csv()?,
        ),
        ReportFormat::Json => (
            dir.join(format!("{}.json", report.experiment)),
            report.to_json(),
        ),
    };
    fs::write(&path, body)?;
    Ok(path)
}
