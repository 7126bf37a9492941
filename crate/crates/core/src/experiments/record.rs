use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;

/// A point estimate with an optional standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sem: Option<f64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, sem: None }
    }

    pub fn with_sem(value: f64, sem: f64) -> Self {
        Self { value, sem: Some(sem) }
    }
}

pub type Estimates = BTreeMap<String, Estimate>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    Failed,
}

/// One ledger line: everything needed to rerun a cell and its results.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub cell: usize,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub estimates: Estimates,
    /// Outside the hypotheses under which decay is expected.
    #[serde(default)]
    pub exploratory: bool,
    pub status: CellStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub code_version: String,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub wall_time_s: f64,
}

pub fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
