//! Experiment configuration: defaults, overridden by command-line flags,
//! overridden in turn by an optional JSON file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use isoflow_core::IntegralIndex;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ISOFLOW_OUT";
const DEFAULT_OUT_DIR: &str = "isoflow-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PdeSign {
    /// Restriction of the cubic block flow.
    Restricted,
    /// Opposite sign on the `|u|²u` term.
    Flipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub t_final: f64,
    pub h: f64,
    pub seed: u64,
    /// Sample count for the factorization.
    pub samples: usize,
    /// Initial number of minus-factor coefficients.
    pub coeffs: usize,
    /// Fourier modes for the PDE.
    pub modes: usize,
    pub pde_sign: PdeSign,
    /// Gate name to tolerance.
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 4,
            k: 2,
            l: 0,
            t_final: 1.0,
            h: 1e-3,
            seed: 0,
            samples: 256,
            coeffs: 40,
            modes: 64,
            pde_sign: PdeSign::Restricted,
            tolerances: BTreeMap::new(),
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
        }
    }
}

/// A partial configuration; unset fields keep the lower-priority value.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub t_final: Option<f64>,
    pub h: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub coeffs: Option<usize>,
    pub modes: Option<usize>,
    pub pde_sign: Option<PdeSign>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub out_dir: Option<PathBuf>,
}

impl ConfigPatch {
    pub fn from_file(path: &Path) -> LabResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| LabError::Json { path: path.to_path_buf(), source })
    }
}

impl ExperimentConfig {
    pub fn apply(&mut self, p: ConfigPatch) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = p.$f { self.$f = v; } )* };
        }
        take!(n, k, l, t_final, h, seed, samples, coeffs, modes, pde_sign, out_dir);
        self.tolerances.extend(p.tolerances);
    }

    /// Defaults, then the output directory from the environment, then `flags`,
    /// then `file`.
    pub fn resolve(flags: ConfigPatch, file: Option<ConfigPatch>) -> LabResult<Self> {
        let mut cfg = Self::default();
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            cfg.out_dir = PathBuf::from(dir);
        }
        cfg.apply(flags);
        if let Some(f) = file {
            cfg.apply(f);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> LabResult<()> {
        let bad = |msg: String| Err(LabError::Config(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        let idx = self.index()?;
        if !idx.is_admissible(self.n) {
            return bad(format!("index ({}, {}) is not admissible for n = {}", self.k, self.l, self.n));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad(format!("h must be positive, got {}", self.h));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t must be nonnegative, got {}", self.t_final));
        }
        if !self.samples.is_power_of_two() || self.samples < 8 {
            return bad(format!("M must be a power of two >= 8, got {}", self.samples));
        }
        if self.coeffs == 0 || 2 * self.coeffs >= self.samples {
            return bad(format!("J must satisfy 0 < J < M/2, got {}", self.coeffs));
        }
        if !self.modes.is_power_of_two() || self.modes < 8 {
            return bad(format!("modes must be a power of two >= 8, got {}", self.modes));
        }
        if let Some((name, tol)) = self.tolerances.iter().find(|(_, t)| t.is_nan() || **t < 0.0) {
            return bad(format!("tolerance {name} must be nonnegative, got {tol}"));
        }
        Ok(())
    }

    pub fn index(&self) -> LabResult<IntegralIndex> {
        IntegralIndex::new(self.k, self.l).map_err(|e| LabError::Config(format!("flow index: {e}")))
    }

    /// Tolerance for `gate`, honoring overrides.
    pub fn tol(&self, gate: &str, default: f64) -> f64 {
        self.tolerances.get(gate).copied().unwrap_or(default)
    }
}

/// Parses `name=value` tolerance overrides.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let value: f64 = value.parse().map_err(|_| format!("not a number: {value:?}"))?;
    Ok((name.to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_flags() {
        let flags = ConfigPatch { n: Some(5), seed: Some(3), ..Default::default() };
        let file: ConfigPatch = serde_json::from_str(r#"{"n": 3, "tolerances": {"drift": 1e-6}}"#).unwrap();
        let cfg = ExperimentConfig::resolve(flags, Some(file)).unwrap();
        assert_eq!((cfg.n, cfg.seed), (3, 3));
        assert_eq!(cfg.tol("drift", 1.0), 1e-6);
        assert_eq!(cfg.tol("other", 1.0), 1.0);
    }

    #[test]
    fn rejects_bad_values() {
        for patch in [
            ConfigPatch { h: Some(0.0), ..Default::default() },
            ConfigPatch { t_final: Some(-1.0), ..Default::default() },
            ConfigPatch { l: Some(1), ..Default::default() },
            ConfigPatch { k: Some(4), ..Default::default() },
            ConfigPatch { n: Some(1), ..Default::default() },
            ConfigPatch { samples: Some(100), ..Default::default() },
            ConfigPatch { coeffs: Some(128), ..Default::default() },
        ] {
            assert!(matches!(ExperimentConfig::resolve(patch, None), Err(LabError::Config(_))));
        }
        assert!(serde_json::from_str::<ConfigPatch>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn tolerance_syntax() {
        assert_eq!(parse_tolerance("drift=1e-6").unwrap(), ("drift".to_string(), 1e-6));
        assert!(parse_tolerance("drift").is_err());
        assert!(parse_tolerance("drift=x").is_err());
    }
}
