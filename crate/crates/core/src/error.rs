use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a nonempty support set")]
    EmptySupport,

    #[error("zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("zero divisor/modulus")]
    ZeroDivisor,

    #[error("coefficient {value} is not within rounding distance of any integer")]
    AmbiguousRounding { value: f64 },

    #[error("empty unitary variety could not be certified up to grid {max_grid}")]
    NoCertificate { max_grid: usize },

    #[error("coefficient tables did not stabilize up to grid {max_grid} (last residual {residual:e})")]
    NoConvergence { max_grid: usize, residual: f64 },

    #[error("h lies in the ideal generated by f")]
    DividesH,

    #[error("grid has too many near-zeros of f (fraction {fraction})")]
    GridZero { fraction: f64 },

    #[error("l1 tail never drops below {threshold:e} within stored radius {max_radius}")]
    TailTooFat { threshold: f64, max_radius: usize },

    #[error("sup-norm {sup} exceeds the declared height bound {bound}")]
    HTooSmall { sup: String, bound: String },

    #[error("f does not divide the input polynomial")]
    NotDivisible,

    #[error("quasi-inverse rejected (experimental={experimental}, residual {residual:e})")]
    QuasiInverseRejected { experimental: bool, residual: f64 },

    #[error("enumeration of {cases} cases exceeds the brute-force guard of {guard}")]
    BlowupGuard { cases: u128, guard: u128 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
