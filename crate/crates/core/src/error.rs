use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u64),
    #[error("no irreducible modulus found for p={p}, e={e}")]
    NoModulus { p: u32, e: u32 },
    #[error("{d} does not divide {e}")]
    NotDivisor { d: u32, e: u32 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("element is not in the requested subfield")]
    NotInSubfield,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("window shrink requested: {0}")]
    WindowShrink(String),
    #[error("negative window depth: {0}")]
    NegativeDepth(String),
    #[error("odd dual exponent {0}")]
    OddNu(i64),
    #[error("pole of order {order} exceeds window depth {allowed}")]
    PoleTooDeep { order: i64, allowed: i64 },
    #[error("insufficient jet depth: {0}")]
    InsufficientDepth(String),
    #[error("enumeration budget exceeded: {needed} > {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("integer overflow in exact accumulation")]
    Overflow,
    #[error("degenerate Frobenius orbit: size {size}, expected {degree}")]
    DegenerateOrbit { size: u32, degree: u32 },
    #[error("support places overlap")]
    SupportOverlap,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("descriptor mismatch")]
    DescriptorMismatch,
    #[error("coefficient outside the base field: {0}")]
    DescentFailure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
