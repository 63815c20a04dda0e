use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mixcenter::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for domain errors, 2 for I/O, parse and usage errors. Failed
    /// checks exit with 1 without an error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn parse(path: &Path, message: impl ToString) -> CliError {
        CliError::Parse {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
