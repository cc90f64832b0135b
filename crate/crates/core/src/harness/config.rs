//! Suite configuration and validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopSelect {
    Abelian,
    Quaternion,
    Octonion,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

/// Everything a suite run depends on; identical configs give
/// byte-identical JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub loop_id: LoopSelect,
    pub abelian_dim: usize,
    pub samples: usize,
    pub radius: f64,
    pub seed: u64,
    pub tolerance: f64,
    /// Check selectors, matched by prefix against check ids
    /// (`"mc"` selects `mc.4a` .. `mc.7c`); `"all"` selects everything,
    /// an empty list selects nothing.
    pub checks: Vec<String>,
    pub report_format: ReportFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            loop_id: LoopSelect::All,
            abelian_dim: 2,
            samples: 50,
            radius: 0.3,
            seed: 42,
            tolerance: 1e-9,
            checks: vec!["all".to_string()],
            report_format: ReportFormat::Text,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("radius must lie in (0, 0.5], got {0}")]
    Radius(f64),
    #[error("samples must be at least 1")]
    Samples,
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("abelian dimension must be at least 1")]
    AbelianDim,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.radius.is_finite() || self.radius <= 0.0 || self.radius > 0.5 {
            return Err(ConfigError::Radius(self.radius));
        }
        if self.samples < 1 {
            return Err(ConfigError::Samples);
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        if self.abelian_dim < 1 {
            return Err(ConfigError::AbelianDim);
        }
        Ok(())
    }

    /// Whether a check id is in the configured selection.
    pub fn selected(&self, check_id: &str) -> bool {
        self.checks
            .iter()
            .any(|sel| sel == "all" || check_id == sel || check_id.starts_with(&format!("{sel}.")))
    }
}

/// Config-file form: every key optional, flags win over file values.
/// Keys accept both the config names and the flag spellings.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct PartialConfig {
    #[serde(alias = "loop")]
    pub loop_id: Option<LoopSelect>,
    #[serde(alias = "dim")]
    pub abelian_dim: Option<usize>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    #[serde(alias = "tol")]
    pub tolerance: Option<f64>,
    pub checks: Option<Vec<String>>,
    #[serde(alias = "report")]
    pub report_format: Option<ReportFormat>,
}

impl SuiteConfig {
    pub fn apply(&mut self, p: PartialConfig) {
        if let Some(v) = p.loop_id {
            self.loop_id = v;
        }
        if let Some(v) = p.abelian_dim {
            self.abelian_dim = v;
        }
        if let Some(v) = p.samples {
            self.samples = v;
        }
        if let Some(v) = p.radius {
            self.radius = v;
        }
        if let Some(v) = p.seed {
            self.seed = v;
        }
        if let Some(v) = p.tolerance {
            self.tolerance = v;
        }
        if let Some(v) = p.checks {
            self.checks = v;
        }
        if let Some(v) = p.report_format {
            self.report_format = v;
        }
    }
}
