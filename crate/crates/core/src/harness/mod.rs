//! Suite orchestration: sampling, sign calibration, tolerance policy,
//! check execution and report assembly.

mod calibrate;
mod config;
mod sample;
mod suite;

pub use calibrate::{calibrate_signs, CalibrationError, CALIBRATION_SEED};
pub use config::{ConfigError, LoopSelect, PartialConfig, ReportFormat, SuiteConfig};
pub use sample::{derive_seed, sample_pairs, sample_points, sample_triples};
pub use suite::{run_suite, SuiteError};
