use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the repair pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Unknown relation or attribute, duplicate attribute names, arity mismatch.
    #[error("schema error: {0}")]
    Schema(String),

    /// A malformed dependency (e.g. inclusion sides of different length).
    #[error("dependency error: {0}")]
    Dependency(String),

    /// An identifier that does not name a tuple or argument of the input.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation does not accept this kind of input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured size ceiling was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error in {source_name} at line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema(_) => "schema",
            Error::Dependency(_) => "dependency",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Resource(_) => "resource",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
