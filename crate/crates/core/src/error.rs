use thiserror::Error;

/// Errors raised by parameter validation and by the verification pipeline.
///
/// Variants fall into two groups: input problems (`InvalidPrime`,
/// `DegenerateBlock`, `SupercuspidalCase`, `ScaleLimit`, `ZeroArgument`,
/// `ZeroElement`) and failed checks, which indicate that a computed object
/// disagrees with what the theory predicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("degenerate block: {0}")]
    DegenerateBlock(String),
    #[error("supercuspidal case d = n = {0} is not covered")]
    SupercuspidalCase(u64),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("valuation of zero is undefined")]
    ZeroArgument,
    #[error("zero has no l-part decomposition")]
    ZeroElement,
    #[error("integrality failure: {0}")]
    IntegralityFailure(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("relation failure: {0}")]
    RelationFailure(String),
    #[error("check `{check}` failed: {detail}")]
    AssertionFailure { check: String, detail: String },
}

impl Error {
    pub(crate) fn assertion(check: &str, detail: impl Into<String>) -> Self {
        Error::AssertionFailure {
            check: check.to_string(),
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPrime(_)
                | Error::DegenerateBlock(_)
                | Error::SupercuspidalCase(_)
                | Error::ScaleLimit(_)
                | Error::ZeroArgument
                | Error::ZeroElement
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
