use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("rank k={k} out of range for size n={n}")]
    RankOutOfRange { k: usize, n: usize },

    #[error("operation requires degree >= 1")]
    Degree,

    #[error("leading coefficient must be nonzero")]
    ZeroLeading,

    #[error("not an isometry: orthonormality defect {defect:e}")]
    NotIsometry { defect: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("all compressed entries vanish identically")]
    DegenerateAllZero,

    #[error("compressions are not scalar (defect {defect:e})")]
    NotAJointTuple { defect: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}
