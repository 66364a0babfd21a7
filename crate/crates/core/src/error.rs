use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Validation { name: &'static str, reason: String },

    #[error("sequences differ in bit composition ({detail})")]
    Composition { detail: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("enumeration budget exceeded: {0}")]
    SizeGuard(String),

    #[error("channel configuration violates P_c(0) > P_c(l) at level {level} (P_c(0) = {p0:e}, P_c({level}) = {pl:e})")]
    WeightOrdering { level: usize, p0: f64, pl: f64 },

    #[error("truncation at l_max = {max_level} is not negligible: P_c({max_level}) = {tail:e} > {limit:e}")]
    Truncation { max_level: usize, tail: f64, limit: f64 },

    #[error("no feasible survivor: received composition is unreachable by any codeword")]
    DecodeFailure,
}

impl Error {
    pub(crate) fn validation(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
