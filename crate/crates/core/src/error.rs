use thiserror::Error;

/// Errors raised by the arithmetic, counting and group-theoretic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("modulus {0:?} is not irreducible over F_{1}")]
    NotIrreducible(Vec<u32>, u32),

    #[error("{what} needs {needed} but the budget allows {limit}")]
    BudgetExceeded { what: &'static str, needed: u64, limit: u64 },

    #[error("the Artin value i(sigma) is undefined for the identity")]
    UndefinedArtinValue,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element list is not closed under composition")]
    NotClosed,

    #[error("subgroup generation exceeded the cap of {0} elements")]
    SubgroupTooLarge(usize),

    #[error("inconsistent ramification data: {0}")]
    Inconsistent(String),

    #[error("matrix does not preserve the Hermitian form")]
    NotUnitary,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
