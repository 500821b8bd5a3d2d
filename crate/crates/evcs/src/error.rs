use std::path::PathBuf;

/// Everything the frontend can fail with, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {inner}")]
    InFile {
        path: PathBuf,
        #[source]
        inner: Box<CliError>,
    },
    #[error(transparent)]
    Core(#[from] evcs_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        CliError::Parse { line, msg: msg.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Attach a file name to a parse or validation error.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        match self {
            e @ (CliError::Io { .. } | CliError::InFile { .. }) => e,
            other => CliError::InFile {
                path: path.into(),
                inner: Box::new(other),
            },
        }
    }

    /// 1 validation, 2 verification failure, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Verification => 2,
            CliError::InFile { inner, .. } => inner.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
