//! Check records, report assembly, and the text/JSON emitters.

use serde::{Deserialize, Serialize};

use crate::harness::SuiteConfig;

/// Largest absolute entry; residuals aggregate in the sup norm.
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// One identity evaluated at one point, reduced to its sup-norm residual.
#[derive(Debug, Clone, Copy)]
pub struct Residual {
    pub id: &'static str,
    pub max_abs: f64,
}

impl Residual {
    pub fn new(id: &'static str, max_abs: f64) -> Self {
        Self { id, max_abs }
    }
}

/// Calibrated global sign conventions, fixed once per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Signs {
    pub sigma: f64,
    pub tau: f64,
}

/// A single row of the report: one check at one sample point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(rename = "loop")]
    pub loop_id: String,
    /// Chart coordinates; point pairs are stored concatenated (g then A).
    pub point: Vec<f64>,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn new(check: &str, loop_id: &str, point: Vec<f64>, residual: f64, tol: f64) -> Self {
        Self {
            check: check.to_string(),
            loop_id: loop_id.to_string(),
            point,
            residual,
            tol,
            pass: residual <= tol,
            error: None,
        }
    }

    /// A failed row for an evaluation that could not be completed.
    pub fn failed(check: &str, loop_id: &str, point: Vec<f64>, tol: f64, reason: String) -> Self {
        Self {
            check: check.to_string(),
            loop_id: loop_id.to_string(),
            point,
            residual: f64::MAX,
            tol,
            pass: false,
            error: Some(reason),
        }
    }
}

/// Full suite report: header, conventions, and sorted records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub version: String,
    pub config: SuiteConfig,
    pub signs: Signs,
    pub notes: Vec<String>,
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "verify {}", self.version).unwrap();
        writeln!(
            out,
            "signs: sigma = {:+}, tau = {:+}",
            self.signs.sigma, self.signs.tau
        )
        .unwrap();
        for note in &self.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        writeln!(
            out,
            "{:<15} {:<11} {:>13} {:>9}  result",
            "check", "loop", "residual", "tol"
        )
        .unwrap();
        for r in &self.records {
            writeln!(
                out,
                "{:<15} {:<11} {:>13.3e} {:>9.1e}  {}{}",
                r.check,
                r.loop_id,
                r.residual,
                r.tol,
                if r.pass { "PASS" } else { "FAIL" },
                match &r.error {
                    Some(reason) => format!("  ({reason})"),
                    None => String::new(),
                }
            )
            .unwrap();
        }
        writeln!(out, "PASSED {}/{}", self.passed(), self.records.len()).unwrap();
        out
    }
}
