use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("spectrum not decayed at k_max: tail magnitude {tail:e}")]
    Truncation { tail: f64 },
    #[error("eigensolver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("series order {0} is not supported (2 or 3 terms only)")]
    UnsupportedOrder(usize),
    #[error("degenerate decay fit: {0}")]
    DegenerateFit(String),
    #[error("singular factorization at pivot {0}")]
    Singular(usize),
    #[error("evolution diverged at step {step}")]
    Divergence { step: usize },
    #[error("mode set is not normalized: gram defect {defect:e}")]
    Normalization { defect: f64 },
    #[error("reconstruction is not real: imaginary residue {residue:e}")]
    RealityViolation { residue: f64 },
    #[error("field is not in the constrained space: b = {b:e}")]
    ConstraintViolation { b: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
