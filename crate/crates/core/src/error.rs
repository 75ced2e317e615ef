use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("utility set must contain at least one point")]
    EmptySet,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {0:?} is not a member of the utility set")]
    NotMember(Vec<f64>),

    #[error("point {0:?} of the first set is missing from the second set")]
    NotSubset(Vec<f64>),

    #[error("set is unbounded along axis {axis}")]
    Unbounded { axis: usize },

    #[error("discretization produced no feasible point (resolution {resolution})")]
    EmptyDiscretization { resolution: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("chain is not nested at position {index}")]
    NotNested { index: usize },

    #[error("ratio undefined: index value of the reference point is zero")]
    UndefinedRatio,

    #[error("no point of the set lies in the domain of {0}")]
    EmptyDomain(String),

    #[error("inconsistent evaluation: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
