use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ExpError>;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("config is not valid JSON: {0}")]
    ConfigParse(#[from] serde_json::Error),
    #[error("{path}: malformed header: {message}")]
    MalformedHeader { path: PathBuf, message: String },
    #[error("{path}: row {row} has {got} cells, expected {expected}")]
    RowArity { path: PathBuf, row: usize, expected: usize, got: usize },
    #[error("{path}: cell at row {row}, column {column} is not a finite number: `{text}`")]
    NonFiniteCell { path: PathBuf, row: usize, column: usize, text: String },
    #[error("instance generation failed: {0}")]
    InstanceGeneration(ermrer_core::Error),
    #[error("solver failure: {0}")]
    Solver(#[from] ermrer_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ExpError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        ExpError::Validation { field: field.to_string(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ExpError::Io { path: path.into(), source }
    }

    /// Process exit code: 1 validation, 2 solver, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExpError::Validation { .. }
            | ExpError::ConfigParse(_)
            | ExpError::MalformedHeader { .. }
            | ExpError::RowArity { .. }
            | ExpError::NonFiniteCell { .. }
            | ExpError::InstanceGeneration(_) => 1,
            ExpError::Solver(_) => 2,
            ExpError::Io { .. } => 3,
        }
    }
}
