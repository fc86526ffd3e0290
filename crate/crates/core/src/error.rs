use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("point is off the model manifold (constraint residual {residual:.3e})")]
    OffManifold { residual: f64 },

    #[error("non-finite chart value at {at:?}")]
    Evaluation { at: Vec<f64> },

    #[error("degenerate chart: metric determinant {det:.3e} at {at:?}")]
    DegenerateChart { det: f64, at: Vec<f64> },

    #[error("degenerate normal frame: rejection norm {norm:.3e}")]
    DegenerateFrame { norm: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("integration failure at u = {u}: {reason}")]
    Integration { u: f64, reason: String },

    #[error("u = {u} outside the integrated span [{lo}, {hi}]")]
    Range { u: f64, lo: f64, hi: f64 },

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
}

pub type Result<T> = std::result::Result<T, Error>;
