use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("random regular graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("coin is not unitary (max deviation {deviation:e})")]
    InvalidCoin { deviation: f64 },

    #[error("column has no positive entries")]
    AllZeroColumn,

    #[error("unreachable target: {0}")]
    BipartiteObstruction(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn graph(msg: impl Into<String>) -> Self {
        Error::InvalidGraph(msg.into())
    }

    pub(crate) fn state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

/// `File::open` with the path in the error message.
pub(crate) fn open_file(path: &str) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}"))))
}
