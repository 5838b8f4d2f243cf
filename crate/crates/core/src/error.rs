use thiserror::Error;

/// Failures raised by the exact arithmetic and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Polynomial division left a nonzero remainder.
    #[error("inexact polynomial division: remainder has degree {remainder_degree}")]
    InexactDivision { remainder_degree: usize },

    /// A brute-force oracle was asked for more work than it is allowed to do.
    #[error("capacity exceeded: {what} needs {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A derivation that must be exact was not (e.g. a sum not divisible by N).
    #[error("internal derivation error: {0}")]
    Derivation(String),

    /// The operation is not defined for this parameter.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that indicate a bug in a derivation rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InexactDivision { .. } | Error::Derivation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
