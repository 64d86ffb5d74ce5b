use std::path::PathBuf;

/// Errors produced anywhere in the detection stack.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("label {0} not in scheme")]
    UnknownLabel(String),

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("document {0:?} has no label")]
    Unlabeled(String),

    #[error("invalid n-gram range ({nmin}, {nmax})")]
    InvalidRange { nmin: usize, nmax: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("negative feature value {value} at column {index}")]
    NegativeFeature { index: usize, value: f64 },

    #[error("no probability model for {0}")]
    NoProbability(&'static str),

    #[error("no probability output in hard voting mode")]
    HardVotingProba,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown preset {name:?}; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("incompatible model file: {0}")]
    IncompatibleModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
