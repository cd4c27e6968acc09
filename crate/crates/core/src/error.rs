use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{n} is too large for packed representation")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("modulus is not a monic irreducible polynomial of the stated degree")]
    ReducibleModulus,
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{q} is not a power of the characteristic {p}")]
    NotAPowerOfP { q: u64, p: u64 },
    #[error("field of degree {source_degree} does not embed in field of degree {target_degree}")]
    NoEmbedding {
        source_degree: u32,
        target_degree: u32,
    },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("Weierstrass data does not have the required shape: {0}")]
    InvalidShape(String),
    #[error("witness does not satisfy the Jacobian criterion")]
    UnverifiedWitness,
    #[error("s = {s} lies outside the convergence region (need s >= {min})")]
    DivergentRegion { s: u32, min: u32 },
    #[error("truncation {requested} exceeds supported bound {supported}")]
    TruncationTooLarge { requested: u32, supported: u32 },
    #[error("point counts are inconsistent: {0}")]
    InconsistentCounts(String),
    #[error("enumeration of {size} items exceeds the cap of {cap}")]
    TooLargeEnumeration { size: u128, cap: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
