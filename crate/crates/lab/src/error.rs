use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// A configuration value outside the preconditions of the command.
    #[error("invalid value for `{field}`: {reason}")]
    Usage { field: &'static str, reason: String },
    #[error("could not read config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("{context}: {source}")]
    Numerics {
        context: &'static str,
        #[source]
        source: logkdv_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn usage(field: &'static str, reason: impl Into<String>) -> Self {
        LabError::Usage {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage { .. } | LabError::Config { .. } => 2,
            _ => 1,
        }
    }
}

/// Attaches the producing module to a core error.
pub(crate) trait Context<T> {
    fn context(self, context: &'static str) -> Result<T>;
}

impl<T> Context<T> for Result<T, logkdv_core::Error> {
    fn context(self, context: &'static str) -> Result<T> {
        self.map_err(|source| LabError::Numerics { context, source })
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
