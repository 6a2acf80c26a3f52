use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("clause on line {line} has {width} literals, expected exactly 3")]
    Width { line: usize, width: usize },

    #[error("clause repeats variable {var}")]
    DuplicateVariable { var: usize },

    #[error("variable {var} out of range for {n} variables")]
    VariableOutOfRange { var: usize, n: usize },

    #[error("a 3-CNF needs at least 3 variables, got {0}")]
    TooFewVariables(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("instance too large for exhaustive oracle: n = {n}, limit {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 usage, 2 I/O, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
