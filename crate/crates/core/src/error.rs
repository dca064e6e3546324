use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order cap exceeded: {what} needs {got}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        got: u64,
        cap: u64,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("the given element set is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("representation level {have} is below the requested level {need}")]
    LevelTooSmall { have: u32, need: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bound {bound} exhausted: {what}")]
    BoundExhausted { what: String, bound: u64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
