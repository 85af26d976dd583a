use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has {found} entries, expected {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, found: usize },

    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    EmptyShape { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("input is not Hermitian: asymmetry {asymmetry:e} exceeds {allowed:e}")]
    NonHermitianInput { asymmetry: f64, allowed: f64 },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("element is zero; the top face is undefined")]
    ZeroElement,

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("difference quotients did not settle (last bracket width {width:e})")]
    NoConvergence { width: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("scalars must be positive (alpha = {alpha}, beta = {beta})")]
    InvalidScalars { alpha: f64, beta: f64 },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
