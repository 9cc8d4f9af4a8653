use thiserror::Error;

/// Errors raised by graph construction, model validation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: axis {axis}: {reason}")]
    InvalidAxis { axis: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown preset `{0}` (expected one of: hexagonal, triangular, ladder)")]
    UnknownPreset(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("field does not live on this graph: {0}")]
    Mismatch(String),

    #[error("non-finite value {value} at vertex {vertex}")]
    NonFinite { vertex: usize, value: f64 },

    #[error("model error: {0}")]
    Model(String),

    #[error("ray projection failed: {reason} (|w|^2 = {norm_sq:e}, last s = {last_s:e})")]
    Projection {
        reason: String,
        norm_sq: f64,
        last_s: f64,
    },

    #[error("direction is not on the unit sphere: |w| = {norm}")]
    OffSphere { norm: f64 },

    #[error("zero field where a nonzero one is required")]
    ZeroField,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
