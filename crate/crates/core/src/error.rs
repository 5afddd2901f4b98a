use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero-containing interval")]
    DivisionByZero,
    #[error("invalid interval endpoints [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("malformed decimal literal {0:?}")]
    Decimal(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid cone specification: {0}")]
    InvalidSpec(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("{0}")]
    InvalidProblem(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("partition violates the parity condition (sum of signs is {0})")]
    Parity(i64),
    #[error("enumeration limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("could not certify positive semidefiniteness after shifting")]
    ShiftFailed,
    #[error("{path}:{line}:{col}: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
