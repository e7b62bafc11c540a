use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at data row {row} of {path}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("column {0:?} not found in the CSV header")]
    MissingColumn(String),

    #[error("non-numeric value {value:?} at data row {row}")]
    NonNumeric { row: usize, value: String },

    #[error("input has {rows} numeric rows; at least {min} are required")]
    TooShort { rows: usize, min: usize },

    #[error("report is empty; refusing to write an empty file")]
    EmptyReport,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(lpboot_core::Error),
}

impl From<lpboot_core::Error> for CliError {
    fn from(e: lpboot_core::Error) -> Self {
        match e {
            lpboot_core::Error::ConfigError(msg) => CliError::Config(msg),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// Process exit code: 2 for configuration problems, 3 for data and
    /// runtime problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}
