use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter set violates its invariants.
    InvalidConfig(String),
    /// Arguments disagree with each other (dimensions, lengths).
    InvalidArgument(String),
    /// Input data (frames, geometry) cannot be processed.
    InvalidInput(String),
    /// A displacement places the candidate block outside the reference frame.
    InvalidCandidate { x: i64, y: i64, n: usize },
    /// A caller broke an operation's precondition.
    ContractViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidCandidate { x, y, n } => {
                write!(f, "candidate block {n}x{n} at ({x}, {y}) is outside the reference frame")
            }
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
