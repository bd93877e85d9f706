use crate::Complex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("theta function evaluated at zero")]
    ZeroArgument,

    #[error("nome modulus {modulus} exceeds guard {guard}")]
    NomeOutOfRange { modulus: f64, guard: f64 },

    #[error("theta product did not reach tail bound within {max_terms} factors")]
    TruncationFailure { max_terms: usize },

    #[error("denominator theta argument {arg} lies within {delta:e} of the zero set")]
    DivisionByZeroTheta { arg: Complex, delta: f64 },

    #[error("bad arity: {0}")]
    BadArity(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("degenerate constraint: {0}")]
    DegenerateConstraint(String),

    #[error("window too small: {0}")]
    InsufficientWindow(String),

    #[error("index {index} outside sequence window [{lo}, {hi}]")]
    IndexOutOfSequenceWindow { index: i64, lo: i64, hi: i64 },

    #[error("multipliers w_{j} and w_{k} are not separated (|w_j - w_k| = {gap:e})")]
    DegenerateSpectrum { j: i64, k: i64, gap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
