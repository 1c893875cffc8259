use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{a} is not a unit modulo {n}")]
    NotAUnit { a: u64, n: u64 },

    #[error("malformed encoding {input:?}: {reason}")]
    Malformed { input: String, reason: String },

    #[error("cyclotomic conductors differ ({left} vs {right})")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("no prime found below the search ceiling {ceiling} for {what}")]
    SearchExhausted { what: String, ceiling: u64 },

    /// An explicit construction produced an object that failed its own check.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("i/o: {0}")]
    Io(String),

    /// Two routes that must agree did not. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
