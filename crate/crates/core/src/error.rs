use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime (an odd prime p >= 3 is required)")]
    NotPrime(u64),
    #[error("operands live in different fields: F_{left} vs F_{right}")]
    ContextMismatch { left: u64, right: u64 },
    #[error("prime {p} exceeds the transform cap {cap}; raise the cap explicitly")]
    PrimeTooLarge { p: u64, cap: u64 },
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("product table would hold {needed} entries, above the limit {limit}")]
    TooLarge { needed: u128, limit: u128 },
    #[error("support of the weight leaves the declared progression at {0}")]
    SupportOutsideProgression(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
