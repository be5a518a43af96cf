use std::fmt;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where a document diagnostic points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid rational {text:?}: {reason}")]
    BadRational { text: String, reason: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("duplicate item id {0:?}")]
    DuplicateId(String),

    #[error("item {item:?} is owned by agent {found} but listed under agent {expected}")]
    OwnerMismatch {
        item: String,
        expected: usize,
        found: usize,
    },

    #[error("item {item:?} has size {size}, outside (0, {capacity}]")]
    SizeOutOfRange {
        item: String,
        size: Box<Rational>,
        capacity: Box<Rational>,
    },

    #[error("item {item:?} has non-positive value {value}")]
    NonPositiveValue { item: String, value: Rational },

    #[error("instance too large: {count} items exceeds the cap of {cap}")]
    TooLarge { count: usize, cap: usize },

    #[error("mechanism {mechanism} needs exactly {expected} agents, got {found}")]
    AgentCount {
        mechanism: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),

    #[error("{position}: {message}")]
    Syntax { position: Position, message: String },

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
