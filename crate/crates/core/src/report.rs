//! Structured verification records.
//!
//! Every check in the crate produces a [`VerificationReport`]. The JSON form
//! is schema-stable: all fields are always present (optional numbers are
//! `null`) and deserialization rejects unknown fields.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::SdlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub tolerance: f64,
    pub params: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, tolerance: f64) -> Self {
        VerificationReport {
            id: id.into(),
            status: Status::Pass,
            lhs: None,
            rhs: None,
            ratio: None,
            tolerance,
            params: BTreeMap::new(),
            notes: Vec::new(),
            runtime_ms: 0,
        }
    }

    /// A failed report carrying the error tag in its notes.
    pub fn from_error(id: impl Into<String>, tolerance: f64, err: &SdlError) -> Self {
        let mut r = Self::new(id, tolerance);
        r.status = Status::Fail;
        r.notes.push(format!("{}: {}", err.name(), err));
        r
    }

    pub fn with_sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.ratio = Some(if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs });
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.set_param(key, value);
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        let v: Value = value.into();
        // serde_json turns non-finite floats into null; keep them readable instead.
        let v = match v {
            Value::Null => Value::String("non-finite".into()),
            other => other,
        };
        self.params.insert(key.to_string(), v);
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Records a residual and demotes the status to fail if it exceeds the tolerance.
    pub fn residual(&mut self, key: &str, value: f64) {
        self.set_param(key, value);
        if !(value <= self.tolerance) {
            self.status = Status::Fail;
        }
    }

    /// Demotes the status to `fail` unless `ok`, recording `why` when it fails.
    pub fn require(&mut self, ok: bool, why: impl Into<String>) {
        if !ok {
            self.status = Status::Fail;
            self.notes.push(why.into());
        }
    }

    /// Demotes pass to warning; never upgrades a failure.
    pub fn warn(&mut self, why: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Warning;
        }
        self.notes.push(why.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
