use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("empty dataset: at least one observation is required")]
    EmptyDataset,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: size {requested} exceeds enumeration cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
