use std::fmt;

use tgd_core::TgdError;

/// Failure classes and their exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or missing arguments: exit 1.
    Usage(String),
    /// Invalid parameters or constraint failures: exit 2.
    Validation(String),
    /// Unreadable, unwritable or malformed files: exit 3.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<TgdError> for CliError {
    fn from(e: TgdError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
