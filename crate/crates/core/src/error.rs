use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring context mismatch: {left} vs {right} variables")]
    ContextMismatch { left: usize, right: usize },

    #[error("invalid ring context: {0}")]
    InvalidRing(String),

    #[error("degenerate ideal: {0}")]
    DegenerateIdeal(String),

    #[error("generator {divisor} divides generator {multiple}; generating set is not minimal")]
    NotMinimal { divisor: usize, multiple: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("integer coefficient overflow in gradient flow")]
    CoefficientOverflow,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
