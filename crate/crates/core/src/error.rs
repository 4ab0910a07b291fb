use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree window escape: {0}")]
    DegreeWindow(String),
    #[error("composability failure: {0}")]
    Composability(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("arity bound exceeded: requested {requested}, allowed {allowed}")]
    ArityBound { requested: usize, allowed: usize },
    #[error("relation failure: {0}")]
    RelationFailure(String),
    #[error("category mismatch: {0}")]
    CategoryMismatch(String),
    #[error("not a twisted complex: {0}")]
    NotTwisted(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
