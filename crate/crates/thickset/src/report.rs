//! Deterministic report emission.
//!
//! Every run produces a human-readable text report and a machine-readable
//! JSON document, both embedding the resolved config and the toolkit
//! version. Given the same config and seeds the bytes are identical across
//! runs: nothing here reads clocks, hostnames, or iteration order of
//! unordered maps.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::config::ReportFormat;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

/// A finished run: one text body plus one JSON result payload.
pub struct Report {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub body: String,
    pub result: serde_json::Value,
}

impl Report {
    pub fn new<C: Serialize, R: Serialize>(
        command: &'static str,
        config: &C,
        body: String,
        result: &R,
    ) -> Result<Self, ReportError> {
        Ok(Self {
            command,
            config: serde_json::to_value(config)?,
            body,
            result: serde_json::to_value(result)?,
        })
    }

    /// Full text document: header, body, and the embedded config.
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "thickset {} :: {}\n{}\n",
            crate::VERSION,
            self.command,
            "=".repeat(60)
        ));
        out.push_str(&self.body);
        if !self.body.ends_with('\n') {
            out.push('\n');
        }
        out.push_str(&format!(
            "{}\nconfig:\n{}\n",
            "-".repeat(60),
            serde_json::to_string_pretty(&self.config).unwrap_or_else(|_| "{}".into())
        ));
        out
    }

    /// Full JSON document.
    pub fn json(&self) -> Result<String, ReportError> {
        #[derive(Serialize)]
        struct Doc<'a> {
            version: &'static str,
            command: &'static str,
            config: &'a serde_json::Value,
            result: &'a serde_json::Value,
        }
        let mut s = serde_json::to_string_pretty(&Doc {
            version: crate::VERSION,
            command: self.command,
            config: &self.config,
            result: &self.result,
        })?;
        s.push('\n');
        Ok(s)
    }

    /// Writes `<command>.txt` and/or `<command>.json` under `dir`, creating
    /// it if needed, and returns the paths written.
    pub fn emit(&self, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>, ReportError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if matches!(format, ReportFormat::Text | ReportFormat::Both) {
            let path = dir.join(format!("{}.txt", self.command));
            std::fs::File::create(&path)?.write_all(self.text().as_bytes())?;
            written.push(path);
        }
        if matches!(format, ReportFormat::Json | ReportFormat::Both) {
            let path = dir.join(format!("{}.json", self.command));
            std::fs::File::create(&path)?.write_all(self.json()?.as_bytes())?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Fixed-precision float for text bodies; infinities and NaN spelled out.
pub fn fmt_f(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.precision$}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_embed_version_and_config() {
        let cfg = serde_json::json!({"matrix": {"betas": [0.5]}});
        let report =
            Report::new("thickness", &cfg, "tau = 1.0\n".into(), &serde_json::json!({"tau": 1.0}))
                .unwrap();
        let text = report.text();
        assert!(text.contains(crate::VERSION));
        assert!(text.contains("tau = 1.0"));
        assert!(text.contains("\"betas\""));
        let json = report.json().unwrap();
        assert!(json.contains("\"version\""));
        assert!(json.ends_with('\n'));
    }

    #[test]
    fn emission_is_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let make = || {
            Report::new(
                "carpet",
                &serde_json::json!({"r": [5, 5]}),
                "tau = 0.430677\n".into(),
                &serde_json::json!({"tau": 0.43067655807339306}),
            )
            .unwrap()
        };
        let first = make().emit(dir.path(), ReportFormat::Both).unwrap();
        let snapshot: Vec<Vec<u8>> =
            first.iter().map(|p| std::fs::read(p).unwrap()).collect();
        let second = make().emit(dir.path(), ReportFormat::Both).unwrap();
        assert_eq!(first, second);
        for (path, bytes) in second.iter().zip(snapshot) {
            assert_eq!(std::fs::read(path).unwrap(), bytes);
        }
    }

    #[test]
    fn float_formatting_handles_edge_values() {
        assert_eq!(fmt_f(0.5, 3), "0.500");
        assert_eq!(fmt_f(f64::INFINITY, 3), "+inf");
        assert_eq!(fmt_f(f64::NEG_INFINITY, 3), "-inf");
        assert_eq!(fmt_f(f64::NAN, 3), "nan");
    }
}
