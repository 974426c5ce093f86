//! Experiment driver for spectral graph matching: instance generation,
//! single-pair matching, noise sweeps with CSV output, and a self-check suite.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod sweep;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use pipeline::Rounder;
pub use sweep::{run_sweep, SweepOptions, SweepOutcome, TrialRecord};
pub use verify::{run_verify, CheckResult, VerifyOptions};
