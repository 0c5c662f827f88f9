//! Error types shared across the crate.

use thiserror::Error;

use crate::pencil::Dimension;

/// Failure while evaluating a sequence at an index.
///
/// Periodic and perturbed sequences never fail; evaluation errors originate
/// from external sequence oracles (dead process, timeout, unparsable reply)
/// and propagate through every construction built on top of them.
#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("sequence oracle failure: {0}")]
    Oracle(String),
}

/// Failure while reading or writing an equation file.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("malformed equation file: {0}")]
    Malformed(String),
    #[error("coefficient {index} is oracle-backed and carries no command; cannot serialize")]
    UnserializableOracle { index: usize },
    #[error("equation has oracle-backed coefficients but no oracle command is available; pass --oracle-cmd")]
    MissingOracleCommand,
}

/// Failure while unfolding an equation into a constant-coefficient system.
#[derive(Debug, Clone, Error)]
pub enum UnfoldError {
    #[error("coefficient {index} is not purely periodic")]
    NonPeriodicCoefficient { index: usize },
    #[error("invalid H = {h}: {reason}")]
    InvalidH { h: usize, reason: String },
}

/// Failure of the exact dimension engine.
#[derive(Debug, Clone, Error)]
pub enum DimensionError {
    /// The equation lies outside the decidable class handled by the exact
    /// engine; refusing is the correct behavior, not a limitation.
    #[error("coefficient {index} is not purely periodic; the exact engine only handles periodic coefficients")]
    NonPeriodicCoefficient { index: usize },
    /// The two independent routes disagreed. This is an internal consistency
    /// failure and must never be reported as an answer.
    #[error("internal route mismatch: determinant route found {pencil}, Groebner route found {groebner}")]
    RouteMismatch {
        pencil: Dimension,
        groebner: Dimension,
    },
}

/// Invalid parameters passed to an equation builder.
#[derive(Debug, Clone, Error)]
#[error("invalid parameter: {0}")]
pub struct BuildError(pub String);

impl From<UnfoldError> for DimensionError {
    fn from(e: UnfoldError) -> Self {
        match e {
            UnfoldError::NonPeriodicCoefficient { index } => {
                DimensionError::NonPeriodicCoefficient { index }
            }
            UnfoldError::InvalidH { h, reason } => {
                // choose_h never produces an invalid H; user-supplied H goes
                // through unfold directly.
                panic!("unexpected invalid H={h} from internal unfolding: {reason}")
            }
        }
    }
}
