use std::fmt;
use std::path::Path;

/// Process exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_WARNINGS: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, flags or input data.
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Invalid(format!("config error: {}", message.into()))
    }

    /// Wraps a core error with the file it came from.
    pub fn in_file(path: &Path, err: tracemine::Error) -> Self {
        let message = format!("{}: {err}", path.display());
        if err.is_io() {
            CliError::Io(message)
        } else {
            CliError::Invalid(message)
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<tracemine::Error> for CliError {
    fn from(err: tracemine::Error) -> Self {
        if err.is_io() {
            CliError::Io(err.to_string())
        } else {
            CliError::Invalid(err.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
