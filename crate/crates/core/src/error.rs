use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {msg}", file.display())]
    Parse { file: PathBuf, line: usize, msg: String },

    #[error("{what} `{id}` is not defined")]
    DanglingReference { what: &'static str, id: String },

    #[error("trip `{trip}`: {msg}")]
    InvalidTimes { trip: String, msg: String },

    #[error("stop `{0}` has no coordinates")]
    MissingCoordinates(String),

    #[error("corrupt label file: {0}")]
    CorruptLabels(String),

    #[error("unsupported file version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("{algo} needs {what}")]
    MissingInput { algo: &'static str, what: &'static str },

    #[error("search exceeded its budget of {0} states")]
    SearchBudget(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(file: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            msg: msg.into(),
        }
    }
}
