use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("decision tree is not valid for this distribution: {0}")]
    TreeInvalid(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("secret x_{} does not label a leaf", .0 + 1)]
    SecretNotInTree(usize),

    #[error("{what} exceeds the supported limit of {limit}")]
    TooLarge { what: &'static str, limit: usize },

    #[error("splitters are undefined for a constant distribution")]
    ConstantDistribution,

    #[error("malformed cone index: {0}")]
    MalformedIndex(String),

    #[error("answers are inconsistent with every remaining candidate")]
    InconsistentAnswers,

    #[error("exact window arithmetic needs {needed} bits, more than the 127 available")]
    PrecisionExceeded { needed: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}
