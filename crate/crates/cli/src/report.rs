//! Versioned JSON report emitted by `check` and `oracle`.

use dstab_core::dstability::Certificate;
use dstab_core::oracle::{Counterexample, SearchOutcome};
use dstab_core::Matrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "dstab-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub eigen_failures: usize,
    pub discarded: usize,
    pub counterexample: Option<Counterexample>,
}

impl OracleSummary {
    pub fn new(seed: u64, o: SearchOutcome) -> Self {
        OracleSummary {
            seed,
            trials_requested: o.trials_requested,
            trials_run: o.trials_run,
            eigen_failures: o.eigen_failures,
            discarded: o.discarded,
            counterexample: o.counterexample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    /// `sha256:` digest of the canonical JSON of `matrix`.
    pub input_digest: String,
    pub matrix: Matrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

pub fn matrix_digest(m: &Matrix) -> String {
    let canonical = serde_json::to_string(m).expect("matrix serializes");
    format!("sha256:{}", hex::encode(Sha256::digest(canonical.as_bytes())))
}

impl ReportDocument {
    pub fn new(command: &str, m: &Matrix) -> Self {
        ReportDocument {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: matrix_digest(m),
            matrix: m.clone(),
            certificate: None,
            oracle: None,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let r: ReportDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if r.schema != SCHEMA {
            return Err(format!("unsupported schema `{}`", r.schema));
        }
        if r.input_digest != matrix_digest(&r.matrix) {
            return Err("input digest does not match the embedded matrix".into());
        }
        Ok(r)
    }
}
