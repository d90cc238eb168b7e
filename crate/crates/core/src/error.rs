use thiserror::Error;

/// Errors raised by the category layer, the engine, the constructions and the
/// certificate codec.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("hom-set {hom} exceeds the size cap of {cap} morphisms")]
    CapExceeded { hom: String, cap: u64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("object {0} has no preimage under the functor")]
    NoPreimage(String),

    #[error("budget refusal: {0}")]
    BudgetRefused(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while computing {0}")]
    Overflow(String),

    #[error("construction aborted at stage `{stage}`: {reason}")]
    ConstructionAbort { stage: String, reason: String },

    #[error("decode error at byte {offset}: {reason}")]
    Decode { offset: usize, reason: String },

    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("stale certificate: {0}")]
    Stale(String),

    #[error("unknown identifier `{0}`")]
    UnknownId(String),
}

impl Error {
    pub(crate) fn abort(stage: impl Into<String>, err: Error) -> Error {
        match err {
            Error::ConstructionAbort { stage: inner, reason } => Error::ConstructionAbort {
                stage: format!("{}/{}", stage.into(), inner),
                reason,
            },
            other => Error::ConstructionAbort {
                stage: stage.into(),
                reason: other.to_string(),
            },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
