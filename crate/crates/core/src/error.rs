use thiserror::Error;

/// Errors raised by the mutation engine and the verification suite.
///
/// Direction and index fields are stored 0-based; `Display` prints them
/// 1-based to match the file formats and the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction {} is out of range for rank {n}", .k + 1)]
    DirectionOutOfRange { k: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid exchange data: {0}")]
    InvalidExchange(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("numeric range error: {0}")]
    NumericRange(String),

    #[error("integer overflow: {0}")]
    IntegerOverflow(String),

    #[error("sign coherence violated at step {step}: c-vector {} is {kind}", .column + 1)]
    SignCoherence {
        step: usize,
        column: usize,
        kind: &'static str,
    },

    #[error("inexact polynomial division")]
    InexactDivision,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error(
        "quadrature on [{a}, {b}] did not reach tolerance {tol:e} \
         (estimate {estimate:e} after {subdivisions} subdivisions)"
    )]
    QuadratureFailed {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
        subdivisions: usize,
    },

    #[error("exchange matrix is not of full rank; the uniform q-shift requires a full-rank B")]
    NotFullRank,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("period search budget exhausted after {explored} words")]
    SearchBudget { explored: usize },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
