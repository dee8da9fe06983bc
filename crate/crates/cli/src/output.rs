//! CSV and JSON emission.
//!
//! Floats are written in the shortest scientific form that parses back to
//! the same `f64`; the formatting never depends on locale.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Round-trip scientific notation, e.g. `1.1562670719881e0`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

/// A CSV table held in memory until written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `base` with `suffix` appended to the file name (`out.csv` + `.manifest.json`).
pub fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// `base` with its extension replaced by `ext`.
pub fn with_extension(base: &Path, stem_suffix: &str, ext: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    base.with_file_name(format!("{stem}{stem_suffix}.{ext}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_round_trip() {
        for x in [1.1562670719881, -0.0, 3e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.1 + 0.2] {
            let s = sci(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(sci(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "region"]);
        t.push(vec![sci(0.5), "frobenius".into()]);
        assert_eq!(String::from_utf8(t.to_bytes().unwrap()).unwrap(), "x,region\n5e-1,frobenius\n");
    }

    #[test]
    fn derived_paths() {
        assert_eq!(sibling(Path::new("run/a.csv"), ".manifest.json"), PathBuf::from("run/a.csv.manifest.json"));
        assert_eq!(with_extension(Path::new("run/a.csv"), ".delta", "svg"), PathBuf::from("run/a.delta.svg"));
    }
}
