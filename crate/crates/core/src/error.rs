use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwtError>;

#[derive(Debug, Error)]
pub enum QwtError {
    #[error("unknown filter {name:?}; available: {available}")]
    UnknownFilter { name: String, available: String },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("level-depth error: {0}")]
    Depth(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error("width error: {0}")]
    Width(String),
    #[error("insufficient borrowable qubits: need {needed}, have {available}")]
    InsufficientBorrowable { needed: usize, available: usize },
    #[error("cannot lower gate: {0}")]
    Unlowerable(String),
    #[error("degenerate projection: probability {0:e}")]
    DegenerateProjection(f64),
    #[error("constant {value} out of range for a {width}-qubit register")]
    ConstantOutOfRange { value: u64, width: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
