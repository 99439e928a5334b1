use thiserror::Error;

use crate::report::AlgebraReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameters are not underdamped: need omega > gamma/2 (omega = {omega}, gamma = {gamma})")]
    OverdampedUnsupported { omega: f64, gamma: f64 },

    #[error("invalid parameter {field}: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("caustic crossed: u2({t}) = {u2} is not positive on the Arnold domain")]
    CausticCrossed { t: f64, u2: f64 },

    #[error("free time {tau} is outside the range reachable from the Arnold domain")]
    TimeOutOfRange { tau: f64 },

    #[error("wavefunction reached the grid boundary (|psi| = {amplitude:.3e} at step {step})")]
    BoundaryLeak { amplitude: f64, step: usize },

    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),

    #[error("z = 0 is a branch point of the eigenfunction")]
    OriginSingular,

    #[error("state is off the constraint surface (residual y-dependence {residual:.3e})")]
    OffConstraintSurface { residual: f64 },

    #[error("time {t} is inside the guard band around a singularity of the branch map")]
    BranchSingularity { t: f64 },

    #[error("Jacobi identity admits no central extension with the requested normalization (residual {residual:.3e})")]
    InconsistentTable { residual: f64 },

    #[error("{} bracket(s) failed: {}", .0.failures().len(), .0.failures().join(", "))]
    Mismatch(Box<AlgebraReport>),

    #[error("grid mismatch: {0}")]
    Grid(String),

    #[error("config error in field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { field: field.into(), reason: reason.into() }
    }
}
