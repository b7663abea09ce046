use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid parameter {field}: {reason}")]
    InvalidParams { field: &'static str, reason: String },
    #[error("empty sample")]
    EmptySample,
    #[error("zero sets have different horizons ({left} vs {right})")]
    HorizonMismatch { left: u64, right: u64 },
    #[error("point {0} is not an element of the set")]
    NotInSet(u128),
    #[error("path ends at {reached} before reaching level {level}; resample with a longer horizon")]
    PathTooShort { level: f64, reached: f64 },
    #[error("root finding did not bracket a solution for target {0}")]
    NoBracket(f64),
    #[error("malformed encoding: {0}")]
    Decode(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
