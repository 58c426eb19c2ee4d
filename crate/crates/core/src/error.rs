use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is even; an odd prime is required")]
    EvenModulus(u64),
    #[error("{0} is below the minimum supported prime 5")]
    BelowMinimum(u64),
    #[error("matrix entries do not have determinant 1 mod {p}")]
    NotInSl2 { p: u64 },
    #[error("g - I is singular; the kernel formula does not apply")]
    SingularCayley,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("scaling parameter must be nonzero")]
    ZeroScaling,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coefficient label (character {character}, slot {slot}) is not in the basis")]
    LabelMismatch { character: usize, slot: usize },
    #[error("integrity check failed: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
