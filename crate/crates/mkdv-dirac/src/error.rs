//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("complete elliptic integral K(m) diverges at m = 1")]
    EllipticDivergence,

    #[error("evaluation failed at x = {x}: {reason}")]
    Evaluation { x: f64, reason: String },

    #[error("grid too coarse for the sharpest soliton: h*eta_max = {product:.4} > 0.2; refine h below {suggested:.5}")]
    GridTooCoarse { product: f64, suggested: f64 },

    #[error("integration overflow at x = {0} despite renormalization")]
    IntegrationOverflow(f64),

    #[error("domain too narrow: |V - V_inf| = {deviation:.3e} at x = {x}, need < 1e-8 for channel initialization")]
    DomainTooNarrow { x: f64, deviation: f64 },

    #[error("potential is not even: max |V(x) - V(-x)| = {violation:.3e}")]
    NotEven { violation: f64 },

    #[error("spec is not periodic; monodromy analysis needs a period")]
    NotPeriodic,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
