//! Experiment configuration and machine-readable reports.
//!
//! A report body (everything except timing) depends only on the command and
//! its configuration, so reruns can be compared byte for byte.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::crofton_flat::OffsetSign;
use crate::grassmann_mc::Normalization;
use crate::tolerances::Thresholds;
use crate::{Error, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub s_values: Vec<f64>,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub variant: Normalization,
    pub offset_sign: OffsetSign,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n: 2,
            k: 1,
            samples: 100_000,
            s_values: vec![0.0, 1.0, 2.0, 3.0],
            tolerance_overrides: BTreeMap::new(),
            variant: Normalization::Factorial,
            offset_sign: OffsetSign::Relative,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("bad config: {e}")))
    }

    pub fn thresholds(&self) -> Result<Thresholds> {
        Thresholds::with_overrides(&self.tolerance_overrides)
    }
}

/// What kind of failure a record signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Exact,
    Geometric,
    Statistical,
}

impl CheckKind {
    /// Process exit code when a record of this kind fails.
    pub fn exit_code(self) -> i32 {
        match self {
            CheckKind::Exact => 2,
            CheckKind::Geometric => 3,
            CheckKind::Statistical => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub expected: Value,
    pub observed: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub passed: bool,
    /// The mathematical statement the record tests.
    pub provenance: String,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub detail: Value,
}

impl CheckRecord {
    pub fn new(name: &str, kind: CheckKind, provenance: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind,
            expected: Value::Null,
            observed: Value::Null,
            tolerance: None,
            passed: false,
            provenance: provenance.to_owned(),
            detail: Value::Null,
        }
    }

    pub fn expected(mut self, v: impl Serialize) -> Self {
        self.expected = to_value(v);
        self
    }

    pub fn observed(mut self, v: impl Serialize) -> Self {
        self.observed = to_value(v);
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn detail(mut self, v: impl Serialize) -> Self {
        self.detail = to_value(v);
        self
    }

    pub fn passed(mut self, p: bool) -> Self {
        self.passed = p;
        self
    }

    /// Record for a check that could not be carried out.
    pub fn errored(name: &str, kind: CheckKind, provenance: &str, error: &Error) -> Self {
        let kind = match error {
            Error::DegenerateTangency { .. } | Error::Transversality(_) => CheckKind::Geometric,
            _ => kind,
        };
        Self::new(name, kind, provenance).observed(format!("error: {error}"))
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")))
}

/// Output of one CLI command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub config: Value,
    /// SHA-256 of the canonical JSON of command and configuration.
    pub input_hash: String,
    pub records: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub output: Value,
    pub passed: bool,
    /// Wall-clock measurements, kept apart from the deterministic body.
    #[serde(default)]
    pub timing: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct Body<'a> {
    command: &'a str,
    config: &'a Value,
    input_hash: &'a str,
    records: &'a [CheckRecord],
    #[serde(skip_serializing_if = "Value::is_null")]
    output: &'a Value,
    passed: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl ReportDocument {
    pub fn new(command: &str, config: impl Serialize) -> Self {
        let config = to_value(config);
        let canonical = serde_json::to_string(&serde_json::json!({ "command": command, "config": config }))
            .unwrap_or_default();
        Self {
            command: command.to_owned(),
            config,
            input_hash: sha256_hex(canonical.as_bytes()),
            records: Vec::new(),
            output: Value::Null,
            passed: true,
            timing: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.passed &= record.passed;
        self.records.push(record);
    }

    /// Deterministic part of the report as JSON.
    pub fn body_json(&self) -> String {
        let body = Body {
            command: &self.command,
            config: &self.config,
            input_hash: &self.input_hash,
            records: &self.records,
            output: &self.output,
            passed: self.passed,
        };
        serde_json::to_string_pretty(&body).unwrap_or_default()
    }

    pub fn body_hash(&self) -> String {
        sha256_hex(self.body_json().as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    /// 0 when every record passed, else the code of the most severe failure:
    /// exact before geometric before statistical.
    pub fn exit_code(&self) -> i32 {
        self.records.iter().filter(|r| !r.passed).map(|r| r.kind).min().map_or(0, CheckKind::exit_code)
    }

    /// Appends the report as one JSON line.
    pub fn append_jsonl(&self, path: &Path) -> Result<()> {
        let line = serde_json::to_string(self).map_err(|e| Error::Validation(e.to_string()))?;
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Validation(format!("cannot open {}: {e}", path.display())))?;
        writeln!(file, "{line}").map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_only_on_inputs() {
        let a = ReportDocument::new("mc", ExperimentConfig::default());
        let b = ReportDocument::new("mc", ExperimentConfig::default());
        assert_eq!(a.input_hash, b.input_hash);
        let c = ReportDocument::new("mc", ExperimentConfig { seed: 1, ..Default::default() });
        assert_ne!(a.input_hash, c.input_hash);
        assert_eq!(a.input_hash.len(), 64);
    }

    #[test]
    fn timing_is_outside_the_body() {
        let mut a = ReportDocument::new("tables", 3);
        a.push(CheckRecord::new("x", CheckKind::Exact, "p").passed(true));
        let mut b = a.clone();
        b.timing.insert("total".into(), 1.5);
        assert_eq!(a.body_json(), b.body_json());
        assert_ne!(a.to_json(), b.to_json());
    }

    #[test]
    fn exit_code_prefers_exact_failures() {
        let mut d = ReportDocument::new("check-all", ());
        assert_eq!(d.exit_code(), 0);
        d.push(CheckRecord::new("s", CheckKind::Statistical, "p"));
        assert_eq!(d.exit_code(), 4);
        d.push(CheckRecord::new("g", CheckKind::Geometric, "p"));
        assert_eq!(d.exit_code(), 3);
        d.push(CheckRecord::new("e", CheckKind::Exact, "p"));
        assert_eq!(d.exit_code(), 2);
        assert!(!d.passed);
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn config_defaults_fill_missing_fields() {
        let c = ExperimentConfig::from_json(r#"{"seed": 5}"#).unwrap();
        assert_eq!(c.seed, 5);
        assert_eq!(c.samples, ExperimentConfig::default().samples);
        assert!(ExperimentConfig { tolerance_overrides: [("nope".to_string(), 1.0)].into(), ..Default::default() }
            .thresholds()
            .is_err());
    }
}
