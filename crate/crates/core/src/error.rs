use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^62")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("rank deficient basis: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },

    #[error("exterior degree {0} is not supported (only 1, 2, 3)")]
    UnsupportedDegree(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(i64, i64),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 2,
            _ => 1,
        }
    }
}
