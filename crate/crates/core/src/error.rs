use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("point id {id} out of range for dataset of {n} points")]
    PointOutOfRange { id: usize, n: usize },

    #[error("dimension {dim} out of range for dataset with {d} dimensions")]
    DimensionOutOfRange { dim: usize, d: usize },

    #[error("subspace must contain at least one dimension")]
    EmptySubspace,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("infeasible generator spec: {0}")]
    Infeasible(String),

    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
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
}
