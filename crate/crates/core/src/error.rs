use thiserror::Error;

/// Errors raised by the evaluators, oracles and parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the integral is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// The exact path was requested for an exponent that is not an integer.
    #[error("exponent #{index} ({value}) is not an exact integer")]
    NotInteger { index: usize, value: String },

    #[error("cannot add pi^({left}/2) to pi^({right}/2)")]
    MixedPiPower { left: i64, right: i64 },

    /// The value does not fit into the normal range of an `f64`.
    #[error("range error: {0}")]
    Range(String),

    /// An integrand evaluated to NaN or infinity at a sample or node.
    #[error("integrand returned {value} at point {point:?}")]
    NonFinite { value: f64, point: Vec<f64> },

    #[error("series evaluation refused: max omega^2 = {max_omega_sq} exceeds {limit}; use the closed form (fluid_closed) instead")]
    SeriesRefused { max_omega_sq: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
