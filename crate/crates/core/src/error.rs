use thiserror::Error;

/// Errors raised by the exact-arithmetic and series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched or unknown variable names.
    #[error("variable error: {0}")]
    Variables(String),

    /// A supplied factorization does not divide the denominator, or the
    /// denominator has a factor outside the admissible set.
    #[error("factorization error: {0}")]
    Factorization(String),

    #[error("not expandable at the origin: denominator has zero constant term")]
    NotExpandable,

    #[error("coefficient ({i},{j}) lies outside truncation degree {n}")]
    OutOfTruncation { i: u32, j: u32, n: u32 },

    /// An identity that must hold exactly did not; signals malformed input
    /// or a transcription fault in hard-coded constants.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// Arguments violate the hypothesis under which a formula is known.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
