use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("prime {p} divides a denominator of {value}")]
    InvalidPrime { p: u64, value: BigRational },

    #[error("{what} is not a p-adic integer for p = {p}")]
    NotPadicInteger { p: u64, what: String },

    #[error("pole in truncated series: ({b})_{k} vanishes")]
    SeriesPole { b: BigRational, k: u64 },

    #[error("precision shortfall: need mod p^{needed}, guaranteed only p^{guaranteed}")]
    Precision { needed: i64, guaranteed: i64 },

    #[error("complex oracle residual {residual:e} exceeds tolerance at {bits} bits")]
    ComplexResidual { residual: f64, bits: u32 },

    #[error("bottom interval is disconnected: components {0:?} and {1:?}")]
    DisconnectedInterval(String, String),

    #[error("p = {p} is not ordinary for this datum (p | F_(p-1))")]
    NotOrdinary { p: u64 },

    #[error("Euler factor coefficient of T^{degree} did not round to an integer (residual {residual})")]
    NonIntegerCoefficient { degree: usize, residual: String },

    #[error("no degenerate linear factor 1 -/+ p^((n-2)/2) T divides the polynomial")]
    NotDegenerate,

    #[error("self-validation failed in {context}: {detail}")]
    ValidationFailure { context: String, detail: String },

    #[error("missing fixture for modular form {label} (offline mode)")]
    MissingFixture { label: String },

    #[error("LMFDB transport error: {0}")]
    Transport(String),

    #[error("eta product summand violates sum(m*r) = 0 mod 24 (got {0})")]
    EtaWeight(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Invalid(String),
}
