use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("need {requested} nonzero-population cells but the mesh has only {available}")]
    InsufficientCells { requested: usize, available: usize },

    #[error("duplicate point: nodes {first} and {second} share coordinates ({x}, {y})")]
    DuplicatePoint {
        first: usize,
        second: usize,
        x: f64,
        y: f64,
    },

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("average degree is undefined on a graph with no alive nodes")]
    EmptyGraph,

    #[error("{0} is undefined on a graph with no edges")]
    NoEdges(&'static str),

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
