//! Discretization and time evolution of the Cauchy problem.

mod grid;
mod initial;
mod oracle;
mod solver;
mod state;
mod trajectory;

pub use grid::{GridSpec, Nonlinearity, Sign};
pub use initial::{InitialData, Profile, VelocityData, GAUSSIAN_CUTOFF};
pub use oracle::{dalembert_oracle, dalembert_transform, OracleOptions, OracleSolution};
pub use solver::{first_step, Observer, Schedule, Solver, DEFAULT_BLOWUP_GUARD};
pub use state::{sample_derivatives, space_derivative, FieldState};
pub use trajectory::{Slice, Trajectory};

/// Errors raised by the solver and the oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter {
        field: &'static str,
        reason: &'static str,
    },
    #[error("blow-up detected at t = {t} (step {step})")]
    BlowUpDetected { t: f64, step: usize },
    #[error("domain too small: support reaches the boundary before t = {t_end}")]
    DomainTooSmall { t_end: f64 },
    #[error("Picard iteration does not contract: p T^2 A^(p-1) = {bound} > 1/2")]
    NoContraction { bound: f64 },
    #[error("Picard iteration did not reach tolerance after {iterations} iterations (last change {last_change})")]
    NonConvergence { iterations: usize, last_change: f64 },
}

pub(crate) fn invalid(field: &'static str, reason: &'static str) -> WaveError {
    WaveError::InvalidParameter { field, reason }
}
