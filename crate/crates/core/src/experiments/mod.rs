//! Scripted scenarios that bind the solver and the diagnostics to the
//! long-time claims and turn finite-horizon measurements into verdicts.
//!
//! The long-time statements are limits; every scenario replaces a limit by a
//! trend gate whose threshold lives in [`Thresholds`] and is echoed in the
//! report. Each run also tracks `E`, `M`, `E_+`, `E_-` at its sample times and
//! downgrades its verdict to [`Verdict::Inconclusive`] when their drift
//! exceeds [`Thresholds::conservation`].

mod config;
mod report;
mod scenarios;

pub use config::{data_support, levine_threshold, ExperimentConfig, Probe, Scenario, Thresholds};
pub use report::{BlowUp, Check, ExperimentReport, Series, Verdict};
pub use scenarios::{
    run, run_concentration, run_conjecture_probe, run_decay, run_focusing, run_retraction, run_tail,
};

use crate::energy::DiagnosticError;
use crate::wave::WaveError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Diagnostic(#[from] DiagnosticError),
    #[error("invalid configuration `{field}`: {reason}")]
    InvalidConfig {
        field: &'static str,
        reason: &'static str,
    },
    #[error("initial data are not even (defect {defect})")]
    EvennessViolated { defect: f64 },
}
