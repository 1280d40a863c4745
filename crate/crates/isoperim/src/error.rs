//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("degenerate shape: {0}")]
    Degenerate(String),

    #[error("resolution too low: got {got}, need at least {min}")]
    ResolutionTooLow { got: usize, min: usize },

    #[error("evaluation point lies on a quadrature node")]
    NodeCollision,

    #[error("conversion error {achieved:.3e} exceeds tolerance {tol:.3e}")]
    ConversionAccuracy { achieved: f64, tol: f64 },

    #[error("normalization diverged (W^(1,inf) norm {w1inf:.4})")]
    NormalizationDiverged { w1inf: f64 },

    #[error("shape leaves the confinement ball: max radius {max_radius:.6} >= {r0}")]
    ConfinementViolated { max_radius: f64, r0: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no valid input rows: {0}")]
    NoValidRows(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
