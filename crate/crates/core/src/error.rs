use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series variable mismatch: var_scale {left} vs {right}")]
    VarScaleMismatch { left: u32, right: u32 },

    #[error("cannot project to q-series: nonzero coefficient at u^{exponent}")]
    Projection { exponent: usize },

    #[error("insufficient truncation order: need {needed}, have {available}")]
    Truncation { needed: usize, available: usize },

    #[error("rank-deficient generator matrix: expected rank {expected}, achieved {achieved}")]
    RankDeficient { expected: usize, achieved: usize },

    #[error("enumeration guard: {0}")]
    TooLarge(String),

    #[error("lattice check failed: {0}")]
    LatticeCheck(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("enumeration budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("linear program: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
