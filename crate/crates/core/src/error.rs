use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied something the operation cannot accept (unknown id,
    /// out-of-range parameter, empty text where text is required).
    #[error("invalid input: {0}")]
    Input(String),

    /// Structured input could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },

    /// Input parsed but violates a structural invariant.
    #[error("validation failed: {}", .offenders.join("; "))]
    Validation { offenders: Vec<String> },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("provider error for {unit}: {source}")]
    Provider {
        unit: String,
        #[source]
        source: ProviderError,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn from_json(err: serde_json::Error, record: Option<usize>) -> Self {
        Error::Parse {
            location: Location {
                record,
                line: err.line(),
                column: err.column(),
            },
            message: err.to_string(),
        }
    }
}

/// Where in an input a parse failure happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    /// Zero-based record index for line-oriented formats.
    pub record: Option<usize>,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.record {
            Some(r) => write!(f, "record {r} (line {}, column {})", self.line, self.column),
            None => write!(f, "line {}, column {}", self.line, self.column),
        }
    }
}

/// Failure talking to an LLM or embedding backend.
#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("unexpected response: {0}")]
    Response(String),
    #[error("missing credential: environment variable `{0}` is not set")]
    MissingCredential(String),
}
