use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Shape(String),
    NotUnitary,
    NotInRing(String),
    PrecisionExhausted { bits: u32 },
    IterationCapExceeded { rounds: u32 },
    LowSuccessProbability(f64),
    TCountMismatch { expected: usize, found: usize },
    NoSolution(String),
    NoPremultiplier,
    NotInSxy,
    NonRingGate(String),
    ProtocolMismatch(String),
    Parse(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::NotUnitary => write!(f, "matrix is not unitary"),
            Error::NotInRing(s) => write!(f, "not in the ring: {s}"),
            Error::PrecisionExhausted { bits } => write!(f, "integer relation not found at {bits} bits"),
            Error::IterationCapExceeded { rounds } => write!(f, "design loop gave up after {rounds} rounds"),
            Error::LowSuccessProbability(p) => write!(f, "success probability {p} is not above 1/2"),
            Error::TCountMismatch { expected, found } => write!(f, "T-count mismatch: expected {expected}, found {found}"),
            Error::NoSolution(s) => write!(f, "norm equation has no solution: {s}"),
            Error::NoPremultiplier => write!(f, "no integral premultiplier for the embedding"),
            Error::NotInSxy => write!(f, "top-left entry is not real"),
            Error::NonRingGate(s) => write!(f, "gate has no exact ring form: {s}"),
            Error::ProtocolMismatch(s) => write!(f, "protocol mismatch: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
        }
    }
}

impl std::error::Error for Error {}
