use thiserror::Error;

/// Errors raised by the exact, asymptotic and simulation paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bank spec: {0}")]
    InvalidSpec(String),

    #[error("a = {a} is above the double-precision limit of {max} alternatives")]
    UnsupportedAlternatives { a: u32, max: u32 },

    #[error("outside the exact oracle's range: {0}")]
    OracleRange(String),

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("series reached the cap of {cap} terms before certification (tail bound {tail_bound:e})")]
    CapExceeded { cap: u64, tail_bound: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} within {intervals} subintervals (error estimate {estimate:e})")]
    QuadratureFailure {
        tolerance: f64,
        intervals: usize,
        estimate: f64,
    },

    #[error("argument outside the function's domain: {0}")]
    Domain(String),

    #[error("probability difference {0:e} is negative beyond round-off")]
    NegativeProbability(f64),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
