use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LclError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid arity: expected {expected}, found {found}")]
    InvalidArity { expected: usize, found: usize },

    #[error("line {line}: expected {expected} labels, found {found}")]
    ArityMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("labeling is incomplete: {0}")]
    IncompleteLabeling(String),

    #[error("tree is incompatible with the problem: {0}")]
    IncompatibleDegree(String),

    #[error("flexibility index not reached within {bound} steps")]
    StabilizationNotReached { bound: usize },

    #[error("decomposition failed internal validation: {0}")]
    DecompositionInvalid(String),

    #[error("labeling completion failed: {0}")]
    CompletionFailure(String),

    #[error("problem is unsolvable (depth 0)")]
    Unsolvable,

    #[error("kind mismatch: {0}")]
    KindMismatch(String),
}

pub type Result<T> = std::result::Result<T, LclError>;
