use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series must have at least one coefficient")]
    Empty,

    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },

    #[error("constant term must be exactly {expected}, found {found}")]
    ConstantTerm { expected: f64, found: Complex64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("function is not normalized (need f(0) = 0, f'(0) = 1): {0}")]
    NotNormalized(String),

    #[error("invalid Caratheodory atoms: {0}")]
    InvalidAtoms(String),

    #[error(
        "{method} did not reach tolerance {tol:e}: best estimate {estimate} \
         (error bound {error_bound:e}, {terms_used} terms)"
    )]
    NotConverged {
        method: &'static str,
        tol: f64,
        estimate: f64,
        error_bound: f64,
        terms_used: u64,
    },

    #[error("round-trip verification failed: deviation {deviation:e} exceeds {limit:e}")]
    RoundTrip { deviation: f64, limit: f64 },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
