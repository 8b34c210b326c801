use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic {0} is too small; need p > 3")]
    PrimeTooSmall(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field of order {p}^{m} exceeds the supported size")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("field of order {q} is too small: need at least {needed} elements")]
    FieldTooSmall { q: u64, needed: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different rings or fields")]
    ContextMismatch,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("substituent {0} has a nonzero constant term")]
    NonNilpotentSubstituent(usize),
    #[error("characteristic polynomial has a nonzero coefficient at t^{0}, which is not a p-power exponent")]
    ShapeViolation(usize),
    #[error("derivation is not in the image of D_H")]
    NotInImage,
    #[error("derivation is not in H_n")]
    NotInH,
    #[error("algebra map is not invertible")]
    NotInvertible,
    #[error("image of x{0} is not in the maximal ideal")]
    NonNilpotentImage(usize),
    #[error("map does not rescale the Hamiltonian form")]
    NotGH,
    #[error("divided-power system left coordinate {0} undetermined")]
    Undetermined(usize),
    #[error("population {population} exceeds the element budget {cap}")]
    BudgetExceeded { population: u64, cap: u64 },
    #[error("no sample accepted after {0} draws")]
    SamplingExhausted(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
