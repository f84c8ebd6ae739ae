use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed record in a line- or row-oriented input.
    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("invalid codebook: {0}")]
    Codebook(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid profile '{profile}': {message}")]
    Profile { profile: String, message: String },

    /// Input for which the statistic is undefined, e.g. a constant sample.
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// Failure inside a multi-stage pipeline, tagged with the stage name.
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by the environment rather than the data.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => e.is_io_error(),
            Error::Stage { source, .. } => source.is_io(),
            _ => false,
        }
    }
}
