use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("CSV is missing column(s): {}", .missing.join(", "))]
    Schema { missing: Vec<String> },
    #[error(transparent)]
    Core(#[from] obdd_phase_core::Error),
}

impl LabError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        LabError::Config { field: field.to_string(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    pub fn input(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        LabError::Input { path: path.into(), message: message.to_string() }
    }
}
