use thiserror::Error;

use crate::norm::RefinementStep;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dilation vector: {0}")]
    InvalidDilation(String),

    #[error("resource limit: {what} needs {estimate} entries, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        estimate: u128,
        budget: u128,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("|x_d| = {x_d:e} is below the singularity threshold; request the limit branch")]
    NearSingularity { x_d: f64 },

    #[error("quadrature did not converge after {} refinements (tol {tol:e})", history.len())]
    NotConverged {
        tol: f64,
        history: Vec<RefinementStep>,
    },

    #[error("Parseval check failed on a {grid:?} grid: relative error {rel_error:e}")]
    Parseval { grid: Vec<usize>, rel_error: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
