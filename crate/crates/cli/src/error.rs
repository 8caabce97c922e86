use std::fmt;
use std::path::Path;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Io(String),
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
            CliError::Diverged(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Io(m) | CliError::Diverged(m) => f.write_str(m),
        }
    }
}

impl From<dtqw::Error> for CliError {
    fn from(e: dtqw::Error) -> Self {
        match e {
            dtqw::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
