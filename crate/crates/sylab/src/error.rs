use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("element is not a member of the group")]
    NotAMember,
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("resource limit exceeded: {what} ({value} > {limit})")]
    ResourceLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("no faithful quotient representation within the degree bound")]
    QuotientTooLarge,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
