use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("clause {clause}: expected 3 literals, found {found}")]
    ClauseArity { clause: usize, found: usize },

    #[error("clause {clause}: variable {var} out of range 1..={num_vars}")]
    VariableOutOfRange {
        clause: usize,
        var: i64,
        num_vars: usize,
    },

    #[error("clause {clause}: variable {var} appears more than once")]
    DuplicateVariable { clause: usize, var: usize },

    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("spin value {0} is not -1 or +1")]
    InvalidSpin(i64),

    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subproblem needs {needed} spins but capacity is {capacity}")]
    CapacityExceeded { needed: usize, capacity: usize },

    #[error("empty variable selection")]
    EmptySelection,

    #[error("exhaustive search limited to {limit} spins, subproblem has {size}")]
    TooLargeForExhaustive { size: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown timing preset {0:?}")]
    UnknownPreset(String),
}
