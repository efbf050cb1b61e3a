//! Merges the JSON summaries in a results directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::output::{Summary, SCHEMA};

/// File name of the merged report; ignored when reading summaries back.
pub const REPORT_FILE: &str = "report.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub runs: usize,
    /// Largest value seen for each gate.
    pub max_values: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub experiments: Vec<ExperimentReport>,
    /// `file: gate` for every failing gate.
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Reads every `*.json` summary in `dir` (except [`REPORT_FILE`]), in file
/// name order.
pub fn collect(dir: &Path) -> LabResult<Vec<(String, Summary)>> {
    let entries = fs::read_dir(dir).map_err(|e| LabError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| LabError::io(dir, e))?.path();
        let is_json = path.extension().is_some_and(|x| x == "json");
        if is_json && path.file_name().is_some_and(|f| f != REPORT_FILE) {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
            let summary: Summary =
                serde_json::from_str(&text).map_err(|source| LabError::Json { path: path.clone(), source })?;
            if summary.schema != SCHEMA {
                return Err(LabError::Config(format!("{}: unsupported schema {}", path.display(), summary.schema)));
            }
            let name = path.file_name().expect("read_dir entry").to_string_lossy().into_owned();
            Ok((name, summary))
        })
        .collect()
}

pub fn merge(summaries: &[(String, Summary)]) -> Report {
    let mut by_experiment: BTreeMap<&str, ExperimentReport> = BTreeMap::new();
    let mut failures = Vec::new();
    for (file, s) in summaries {
        let entry = by_experiment.entry(&s.experiment).or_insert_with(|| ExperimentReport {
            experiment: s.experiment.clone(),
            runs: 0,
            max_values: BTreeMap::new(),
            pass: true,
        });
        entry.runs += 1;
        entry.pass &= s.pass;
        for g in &s.gates {
            let v = entry.max_values.entry(g.name.clone()).or_insert(g.value);
            *v = v.max(g.value);
        }
        failures.extend(s.failing().map(|g| format!("{file}: {}", g.name)));
        if !s.pass && s.failing().next().is_none() {
            failures.push(format!("{file}: (marked failing)"));
        }
    }
    let experiments: Vec<_> = by_experiment.into_values().collect();
    let pass = experiments.iter().all(|e| e.pass);
    Report { schema: SCHEMA, experiments, failures, pass }
}

/// Collects, merges and writes `dir/report.json`.
pub fn report(dir: &Path) -> LabResult<Report> {
    let merged = merge(&collect(dir)?);
    let path = dir.join(REPORT_FILE);
    let text = serde_json::to_string_pretty(&merged).expect("report serializes");
    fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
    Ok(merged)
}
