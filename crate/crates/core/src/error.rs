use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0}: the zero ideal is not allowed here")]
    ZeroIdeal(&'static str),

    #[error("{0}: the unit ideal is not allowed here")]
    UnitIdeal(&'static str),

    #[error("containment precondition violated: {witness} lies in the smaller ideal's generators but not in the larger ideal")]
    NotContained { witness: String },

    #[error("empty variable subset")]
    EmptyVariableSet,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("could not certify ceil({n} * {scalar}) within {bits} bits of precision")]
    Certification { scalar: String, n: u64, bits: u32 },

    #[error("table filtration evaluated at n = {requested}, but only n <= {available} is defined")]
    TableRange { requested: u64, available: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("ideal at n = {n} is not primary to the maximal ideal")]
    NotPrimary { n: u64 },

    #[error("Hilbert-Samuel function did not stabilize within k <= {k_max}")]
    Stabilization { k_max: u64 },

    #[error("precondition violated at n = {n}: {detail}")]
    Violation { n: u64, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
