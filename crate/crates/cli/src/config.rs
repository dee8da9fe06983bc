//! `key=value` solver configuration files.
//!
//! Resolution order: built-in defaults, then the file named by `--config`
//! (or `RISEWELL_CONFIG`), then command-line flags. `precision_digits` is
//! applied first because the default `series_tol` follows it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use risewell_core::exponent::SolverConfig;
use serde::Serialize;

use crate::CliError;

pub const ENV_VAR: &str = "RISEWELL_CONFIG";

const KEYS: [&str; 5] = ["precision_digits", "series_tol", "max_terms", "derivative_step", "wronskian_shift_check"];

/// Parsed `key=value` pairs; later duplicates win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!("config line {}: unknown key {k:?}", lineno + 1)));
            }
            entries.insert(k.to_string(), v.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}"))),
        }
    }
}

/// The config path from the flag, falling back to the environment.
pub fn config_path(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
}

/// Builds the solver configuration from an optional file and a precision override.
pub fn resolve(file: Option<&ConfigFile>, precision: Option<u32>) -> Result<SolverConfig, CliError> {
    let empty = ConfigFile::default();
    let file = file.unwrap_or(&empty);
    let digits = match precision {
        Some(d) => d,
        None => file.get::<u32>("precision_digits")?.unwrap_or(SolverConfig::default().precision_digits),
    };
    let mut cfg = SolverConfig::with_precision(digits);
    if let Some(v) = file.get("series_tol")? {
        cfg.series_tol = v;
    }
    if let Some(v) = file.get("max_terms")? {
        cfg.max_terms = v;
    }
    if let Some(v) = file.get("derivative_step")? {
        cfg.derivative_step = v;
    }
    if let Some(v) = file.get("wronskian_shift_check")? {
        cfg.wronskian_shift_check = v;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Serializable copy of a [`SolverConfig`] for manifests.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigSnapshot {
    pub precision_digits: u32,
    pub series_tol: f64,
    pub max_terms: usize,
    pub derivative_step: f64,
    pub wronskian_shift_check: bool,
}

impl From<&SolverConfig> for ConfigSnapshot {
    fn from(c: &SolverConfig) -> Self {
        ConfigSnapshot {
            precision_digits: c.precision_digits,
            series_tol: c.series_tol,
            max_terms: c.max_terms,
            derivative_step: c.derivative_step,
            wronskian_shift_check: c.wronskian_shift_check,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let f = ConfigFile::parse("# solver\nprecision_digits = 30\nmax_terms=5000 # cap\n\nwronskian_shift_check=false\n").unwrap();
        let c = resolve(Some(&f), None).unwrap();
        assert_eq!(c.precision_digits, 30);
        assert_eq!(c.series_tol, 1e-30);
        assert_eq!(c.max_terms, 5000);
        assert!(!c.wronskian_shift_check);
        let c = resolve(Some(&f), Some(50)).unwrap();
        assert_eq!(c.precision_digits, 50);
        assert_eq!(c.series_tol, 1e-50);
    }

    #[test]
    fn explicit_tolerance_survives_precision_override() {
        let f = ConfigFile::parse("series_tol=1e-35").unwrap();
        assert_eq!(resolve(Some(&f), Some(45)).unwrap().series_tol, 1e-35);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ConfigFile::parse("precision 40").is_err());
        assert!(ConfigFile::parse("colour=blue").is_err());
        let f = ConfigFile::parse("max_terms=many").unwrap();
        assert!(resolve(Some(&f), None).is_err());
        let f = ConfigFile::parse("series_tol=1e-3").unwrap();
        assert!(resolve(Some(&f), None).is_err());
        assert!(resolve(None, Some(8)).is_err());
    }
}
