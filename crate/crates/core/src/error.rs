use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("unknown index {index} for basis {basis}")]
    UnknownIndex { basis: String, index: usize },

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("tail decay exponent must exceed 1, got {0}")]
    NonIntegrableDecay(f64),

    #[error("grid too large: {0} points (limit 1e8)")]
    GridTooLarge(f64),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
