use thiserror::Error;

use crate::multigraph::EdgeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("infeasible target marginal {target}: a hard-core distribution with uniform marginals 1/c exists only when the fractional chromatic index is below c (here chi* = {chi_star})")]
    Infeasible { target: f64, chi_star: String },

    #[error("calibration did not converge after {iterations} iterations (max error {max_error:e})")]
    Calibration {
        iterations: usize,
        max_error: f64,
        best: Box<crate::hardcore::CalibrationResult>,
    },

    #[error("round failed after {attempts} attempts: {reason}")]
    RoundFailed { attempts: usize, reason: String },

    #[error("greedy list completion blocked at edge {edge}")]
    GreedyBlocked { edge: EdgeId },

    #[error("edge {edge} has an empty color list")]
    EmptyList { edge: EdgeId },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
