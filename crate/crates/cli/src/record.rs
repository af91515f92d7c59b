use serde::{Deserialize, Serialize};
use spectra_core::{BoundsReport, CriticalPointReport, Spectrum};

use crate::config::{Level, RunConfig};

/// Bumped whenever a payload field changes meaning.
pub const SCHEMA_VERSION: &str = "1.0";

/// One invocation's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: String,
    pub timestamp: String,
    pub config: RunConfig,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Eig(Vec<EigEntry>),
    Minimize(Vec<MinimumEntry>),
    Table1(Table1Payload),
    Bounds(Vec<BoundsEntry>),
    Limit(Vec<LimitEntry>),
    Verify(VerifyPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigEntry {
    pub k: u32,
    pub alpha: f64,
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimumEntry {
    pub k: u32,
    pub report: Option<CriticalPointReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Payload {
    pub tolerance: f64,
    pub rows: Vec<Table1Row>,
}

/// Cells are ordered `(α_min, λ₁, λ₂, λ₃)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: u32,
    pub reference: [f64; 4],
    pub computed: Option<[f64; 4]>,
    pub deviation: Option<[f64; 4]>,
    /// Names of cells whose deviation exceeds the tolerance.
    pub flagged: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsSample {
    pub alpha: f64,
    pub lambda: [f64; 3],
    pub upper_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsEntry {
    pub k: u32,
    pub report: BoundsReport,
    pub samples: Vec<BoundsSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEntry {
    pub k: u32,
    pub j: u32,
    pub alpha: f64,
    pub eps: f64,
    /// `α² + (jπ/2)²`.
    pub limit: f64,
    pub reduced_root: Option<f64>,
    pub reduced_error: Option<String>,
    /// Root of the full gluing condition, when one exists below both outer levels.
    pub glue_root: Option<f64>,
    pub correction_scale: f64,
    /// `λ_j(Q^(k)(α))` from the eigensolver.
    pub eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Option<f64>,
    /// Human-readable acceptance rule, e.g. `<= 1e-8`.
    pub rule: String,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<Check>,
}
