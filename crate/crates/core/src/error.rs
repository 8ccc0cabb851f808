use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("n = {n} is outside the table range 0..={n_max}")]
    OutOfRange { n: usize, n_max: usize },

    #[error("pole: {0}")]
    Pole(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unknown inequality id `{0}`")]
    UnknownInequality(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
