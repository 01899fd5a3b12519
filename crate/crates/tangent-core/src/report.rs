//! Line-delimited machine records for classification and oracle runs.
//!
//! One JSON object per line, fixed field order, no timestamps: identical
//! runs produce byte-identical output. `null` stands for "not
//! applicable" (no direction for a non-tangent verdict, no coordinates
//! for an unevaluable point).

use serde::{Deserialize, Serialize};

use crate::oracle::OracleOutcome;
use crate::tangent::TangentReport;

/// One classification result. Field order is part of the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineRecord {
    pub t0: f64,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub verdict: String,
    pub dirx: Option<f64>,
    pub diry: Option<f64>,
    pub dirz: Option<f64>,
    pub residual: Option<f64>,
    /// Probes spent by the converged plus-side limit (0 otherwise).
    pub steps_plus: usize,
    /// Probes spent by the converged minus-side limit (0 otherwise).
    pub steps_minus: usize,
    pub note: Option<String>,
}

fn finite(v: f64) -> Option<f64> {
    if v.is_nan() {
        None
    } else {
        Some(v)
    }
}

impl MachineRecord {
    pub fn from_report(report: &TangentReport) -> MachineRecord {
        MachineRecord {
            t0: report.t0,
            x: finite(report.point.x),
            y: finite(report.point.y),
            z: finite(report.point.z),
            verdict: report.verdict.as_str().to_owned(),
            dirx: report.direction.map(|d| d.x),
            diry: report.direction.map(|d| d.y),
            dirz: report.direction.map(|d| d.z),
            residual: report.collinearity_residual,
            steps_plus: report.plus.steps_used(),
            steps_minus: report.minus.steps_used(),
            note: if report.notes.is_empty() {
                None
            } else {
                Some(report.notes.clone())
            },
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("machine records serialize")
    }

    pub fn parse(line: &str) -> Result<MachineRecord, serde_json::Error> {
        serde_json::from_str(line)
    }
}

/// One oracle case result. Field order is part of the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub name: String,
    pub curve: String,
    pub t0: f64,
    pub expected_verdict: String,
    pub verdict: String,
    pub pass: bool,
    pub residual: Option<f64>,
    pub note: Option<String>,
}

impl OracleRecord {
    pub fn from_outcome(outcome: &OracleOutcome) -> OracleRecord {
        OracleRecord {
            name: outcome.name.to_owned(),
            curve: outcome.curve.clone(),
            t0: outcome.t0,
            expected_verdict: outcome.expected.as_str().to_owned(),
            verdict: outcome.verdict.as_str().to_owned(),
            pass: outcome.pass,
            residual: outcome.residual,
            note: if outcome.note.is_empty() {
                None
            } else {
                Some(outcome.note.clone())
            },
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("oracle records serialize")
    }

    pub fn parse(line: &str) -> Result<OracleRecord, serde_json::Error> {
        serde_json::from_str(line)
    }
}
