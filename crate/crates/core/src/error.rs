use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("inconsistent presentation: failing overlap {0}")]
    Inconsistent(String),
    #[error("collection exceeded the budget of {0} elementary rewrites")]
    CollectionBudget(u64),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("cannot certify power subgroup: {0}")]
    PowerSubgroup(String),
    #[error("group is not powerfully nilpotent")]
    NotPowerfullyNilpotent,
    #[error("outside feasible range: {0}")]
    Infeasible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
