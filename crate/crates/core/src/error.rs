use thiserror::Error;

use crate::structures::{Side, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Table shapes do not match the declared sizes.
    #[error("malformed structure: {0}")]
    Malformed(String),

    #[error("empty carrier")]
    EmptyCarrier,

    #[error("{what} index {index} out of range (size {size})")]
    OutOfRange { what: &'static str, index: usize, size: usize },

    /// The action table composes like an action on the other side.
    #[error("action declared {declared} but the table composes as a {actual} action")]
    SideMismatch { declared: Side, actual: Side },

    #[error("expected a {expected} S-poset, got a {found} one")]
    WrongSide { expected: Side, found: Side },

    #[error("S-posets are over different pomonoids")]
    MonoidMismatch,

    #[error("axioms violated: {0}")]
    Invalid(ValidationReport),

    #[error("map is not an S-pomorphism")]
    NotPomorphism,

    #[error("arity mismatch: expected {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("requested size {requested} exceeds the cap {cap}")]
    OverCap { requested: usize, cap: usize },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown or unimplemented class `{0}`")]
    UnknownClass(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}
