use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("search bound {bound} exceeded after inspecting {inspected} places")]
    SearchExhausted { inspected: u64, bound: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("not invertible mod e: {0}")]
    NotInvertible(String),

    #[error("invariant breach: {0}")]
    Invariant(String),

    #[error("not v-integral: {0}")]
    NotIntegral(String),

    #[error("Artin symbol undefined at ramified place {0}")]
    Ramified(String),

    #[error("class group too large: |D| = {0}")]
    ClassGroupTooLarge(u64),

    #[error("factoring bound exceeded for {0}")]
    FactorBound(String),

    #[error("insufficient precision at {bits} bits, retry with {suggested}")]
    Precision { bits: u64, suggested: u64 },

    #[error("S too small: {0}")]
    STooSmall(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate: trivial group, L = K")]
    Degenerate,
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    SearchBound,
    Validation,
    Invariant,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SearchExhausted { .. } | Error::FactorBound(_) => ErrorKind::SearchBound,
            Error::Inconsistent(_) | Error::NotInvertible(_) | Error::Invariant(_) => {
                ErrorKind::Invariant
            }
            _ => ErrorKind::Validation,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::SearchBound => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Invariant => 4,
        }
    }
}
