//! Run artifacts: a CSV time series and a JSON summary per experiment.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{LabError, LabResult};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Gate {
    /// Passes when `value ≤ tol`; NaN fails.
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.to_string(), value, tol, pass: value <= tol }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: u32,
    pub experiment: String,
    pub config: serde_json::Value,
    pub gates: Vec<Gate>,
    pub pass: bool,
}

impl Summary {
    pub fn new(experiment: &str, config: &ExperimentConfig, gates: Vec<Gate>) -> Self {
        let config = serde_json::to_value(config).expect("config serializes");
        let pass = gates.iter().all(|g| g.pass);
        Self { schema: SCHEMA, experiment: experiment.to_string(), config, gates, pass }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| !g.pass)
    }
}

/// Rows of a time series with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Version comment, column legend comment, header, rows. Values use
    /// round-trip formatting, so output is deterministic.
    pub fn to_csv(&self, legend: &str) -> String {
        let mut s = String::new();
        writeln!(s, "# isoflow {} schema {SCHEMA}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(s, "# {legend}").unwrap();
        writeln!(s, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        s
    }
}

/// Complete result of one experiment.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: Summary,
    pub table: Option<(Table, String)>,
}

fn write_file(path: &Path, contents: &str) -> LabResult<()> {
    fs::write(path, contents).map_err(|e| LabError::io(path, e))
}

/// Writes `<dir>/<experiment>.json` and, for time series, `<dir>/<experiment>.csv`.
pub fn write_run(dir: &Path, out: &RunOutput) -> LabResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut written = Vec::new();
    let json_path = dir.join(format!("{}.json", out.summary.experiment));
    let json = serde_json::to_string_pretty(&out.summary).expect("summary serializes");
    write_file(&json_path, &json)?;
    written.push(json_path);
    if let Some((table, legend)) = &out.table {
        let csv_path = dir.join(format!("{}.csv", out.summary.experiment));
        write_file(&csv_path, &table.to_csv(legend))?;
        written.push(csv_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_semantics() {
        assert!(Gate::at_most("x", 1e-9, 1e-8).pass);
        assert!(Gate::at_most("x", 1e-8, 1e-8).pass);
        assert!(!Gate::at_most("x", 2e-8, 1e-8).pass);
        assert!(!Gate::at_most("x", f64::NAN, 1e-8).pass);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["t".into(), "H_1_0".into()]);
        t.push(vec![0.0, 2.5]);
        let csv = t.to_csv("legend");
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# isoflow "));
        assert_eq!(lines[1], "# legend");
        assert_eq!(lines[2], "t,H_1_0");
        assert_eq!(lines[3], "0e0,2.5e0");
    }

    #[test]
    fn summary_round_trip() {
        let s = Summary::new("flow", &ExperimentConfig::default(), vec![Gate::at_most("a", 1.0, 0.5)]);
        assert!(!s.pass);
        let back: Summary = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.failing().count(), 1);
    }
}
