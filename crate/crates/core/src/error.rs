use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gradient requested at a zero-density point {0:?}")]
    ZeroDensity(Vec<f64>),

    #[error("initial point {0:?} has zero density under the target")]
    InvalidInit(Vec<f64>),

    #[error("series has zero variance")]
    ConstantSeries,

    #[error("series too short: need at least {need} values, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("sample {0:?} lies outside the box")]
    OutOfBox(Vec<f64>),

    #[error("grid shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),

    #[error("grid is not normalized (sum = {0})")]
    NotNormalized(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
