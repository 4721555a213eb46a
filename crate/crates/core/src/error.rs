use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("functions live on different groups")]
    GroupMismatch,
    #[error("reducible representation: commutant dimension {0}")]
    Reducible(usize),
    #[error("not square integrable at this scale: probe spread {0:e}")]
    NotSquareIntegrable(f64),
    #[error("unsupported here: {0}")]
    Unsupported(String),
    #[error("unsupported ordering: symmetric ordering needs odd N, got N = {0}")]
    UnsupportedOrdering(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("composition leaves the grid")]
    OffGrid,
    #[error("basis is not orthonormal: Gram deviation {0:e}")]
    NonOrthonormal(f64),
    #[error("incomplete dual: sum of squared dimensions is {got}, group order is {order}")]
    IncompleteDual { got: usize, order: usize },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
