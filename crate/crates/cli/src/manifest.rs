//! Run manifests written next to every output file as `<file>.manifest.json`.
//!
//! Data files never contain timestamps, so two runs with equal `command`,
//! `parameters` and `config` produce byte-identical data.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::ConfigSnapshot;
use crate::output::{json_bytes, sibling};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub config: ConfigSnapshot,
    pub workers: usize,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<String>,
}

/// Records start time on creation; [`Recorder::finish`] writes the manifest.
#[derive(Debug)]
pub struct Recorder {
    command: String,
    parameters: Value,
    config: ConfigSnapshot,
    workers: usize,
    started: String,
    outputs: Vec<PathBuf>,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl Recorder {
    pub fn new(command: &str, parameters: Value, config: ConfigSnapshot, workers: usize) -> Self {
        Recorder { command: command.into(), parameters, config, workers, started: now(), outputs: Vec::new() }
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            config: self.config.clone(),
            workers: self.workers,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            started: self.started.clone(),
            finished: now(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    /// Writes the manifest beside `primary`, returning its path.
    pub fn finish(&self, primary: &Path) -> Result<PathBuf, CliError> {
        let path = sibling(primary, ".manifest.json");
        std::fs::write(&path, json_bytes(&self.manifest())?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use risewell_core::exponent::SolverConfig;

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("scan.csv");
        let mut r = Recorder::new("scan", serde_json::json!({"a": "3/1", "points": 4}), (&SolverConfig::default()).into(), 1);
        r.add_output(&out);
        let m = r.finish(&out).unwrap();
        assert!(m.ends_with("scan.csv.manifest.json"));
        let v: Value = serde_json::from_slice(&std::fs::read(m).unwrap()).unwrap();
        assert_eq!(v["command"], "scan");
        assert_eq!(v["parameters"]["a"], "3/1");
        assert_eq!(v["config"]["precision_digits"], 40);
        assert_eq!(v["outputs"][0], out.display().to_string());
    }
}
