use thiserror::Error;

pub type Result<T> = std::result::Result<T, ModeqError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeqError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("precision exhausted: {0}; retry with a larger precision_bits")]
    PrecisionExhausted(String),

    #[error("lambda mismatch: lambda^2 = {left} vs {right}")]
    LambdaMismatch { left: u32, right: u32 },

    #[error("lower-left coefficient {c} is not divisible by p = {p}")]
    Divisibility { c: String, p: u64 },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("unsupported signature {0}; expected 2, 3 or 4")]
    Signature(String),

    #[error("nullspace is not one-dimensional: singular value gap 2^{gap_bits:.1} is below the required 2^{required_bits}")]
    AmbiguousNullspace { gap_bits: f64, required_bits: u32 },

    #[error("rational rounding failed: {0}")]
    RoundingFailure(String),

    #[error("fitted polynomial has bidegree ({x_degree}, {y_degree}), expected ({mu}, {mu})")]
    DegreeMismatch {
        mu: usize,
        x_degree: usize,
        y_degree: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl ModeqError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ModeqError::Domain(msg.into())
    }
}
