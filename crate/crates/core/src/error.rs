use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {point:?} lies outside the grid in dimension {dim}")]
    OutOfBounds { point: Vec<f64>, dim: usize },

    #[error("dimension {dim} has {count} nodes; stencil needs at least {needed}")]
    InsufficientNodes { dim: usize, count: usize, needed: usize },

    #[error("no derivative pair supplied for dimension {0}")]
    MissingDerivative(usize),

    #[error("all dissipation bounds are zero; no finite CFL step exists")]
    ZeroDissipation,

    #[error("invalid numerics configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value produced at t = {time} (CFL violation?)")]
    NonFinite { time: f64 },

    #[error("control {control:?} is outside the admissible set")]
    InadmissibleControl { control: Vec<f64> },

    #[error("unknown dynamics model `{0}`")]
    UnknownModel(String),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("solution has no stored slices")]
    EmptySolution,

    #[error("trajectory synthesis failed: {reason}")]
    SynthesisFailed { reason: String, values_along_path: Vec<f64> },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("malformed value slice file: {0}")]
    SliceFormat(String),

    #[error("malformed trajectory csv: {0}")]
    TrajectoryCsv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
