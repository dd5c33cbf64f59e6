use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error in {file} at {location}: {message}")]
    Parse {
        file: String,
        location: String,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("pair never co-occurred: empty occurrence list")]
    EmptyOccurrences,

    #[error("empty graph: no triples were extracted")]
    EmptyGraph,

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("graph has {nodes} nodes; the exhaustive oracle accepts at most {limit}")]
    RefusedSize { nodes: usize, limit: usize },

    #[error("priority queue exceeded {cap} entries")]
    ResourceExhausted { cap: usize },

    #[error("no cornerstones")]
    NoCornerstones,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(
        file: impl Into<String>,
        location: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            file: file.into(),
            location: location.into(),
            message: message.into(),
        }
    }

    /// Errors caused by the question or the data rather than by the environment.
    /// The command line maps these to exit code 2.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            Error::Io { .. } | Error::Parse { .. } | Error::NotFound(_)
        )
    }

    /// Stable machine-readable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotFound(_) => "NotFound",
            Error::Parse { .. } => "ParseError",
            Error::Io { .. } => "IoError",
            Error::EmptyOccurrences => "EmptyOccurrences",
            Error::EmptyGraph => "EmptyGraph",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::RefusedSize { .. } => "RefusedSize",
            Error::ResourceExhausted { .. } => "ResourceExhausted",
            Error::NoCornerstones => "NoCornerstones",
            Error::Config(_) => "ConfigError",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
