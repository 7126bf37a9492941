use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{required} divides {value} is required but does not hold")]
    Divisibility { required: usize, value: usize },

    #[error("constraint set is empty; its maximum is -inf")]
    EmptyConstraintSet,

    #[error("enumeration of {size} configurations exceeds the budget of {budget}; use the annealing solver instead")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("configuration is not balanced: label counts {0:?}")]
    Unbalanced(Vec<usize>),

    #[error("probability vector is outside the simplex (deviation {0:e})")]
    OutsideSimplex(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
