use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("state is not flagged as normalized")]
    NotNormalized,

    #[error("state norm {norm_sqr} deviates from 1")]
    NormViolation { norm_sqr: f64 },

    #[error("non-finite amplitude at index {0}")]
    NonFiniteAmplitude(usize),

    #[error("coin dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("parameter must be finite, got {0}")]
    NonFiniteParameter(f64),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid size {size}: {reason}")]
    InvalidSize { size: usize, reason: String },

    #[error("index {index} out of range for {len} positions")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: duplicate edge from vertex {source_vertex} with coin label {label}")]
    DuplicateEdge {
        line: usize,
        source_vertex: usize,
        label: i32,
    },

    #[error("line {line}: coin label {label} is not valid for D={dim}")]
    LabelOutOfRange { line: usize, label: i32, dim: usize },

    #[error(
        "coin label {label} maps vertices {first} and {second} onto vertex {target}; \
         the shift is not unitary"
    )]
    NonInjectiveLabelMap {
        label: i32,
        first: usize,
        second: usize,
        target: usize,
    },

    #[error(
        "vertex {vertex} carries amplitude but has no outgoing edges (graph horizon exceeded)"
    )]
    HorizonExceeded { vertex: usize },

    #[error(
        "vertex {vertex} merges into a shared layer but carries amplitude on coin label {label}"
    )]
    UnsortedMergeInput { vertex: usize, label: i32 },

    #[error("{rows} x {rows} dense operator exceeds the {limit}-dimensional guard")]
    TooLargeForDense { rows: usize, limit: usize },

    #[error("Fisher information must be positive, got {0}")]
    NonPositiveFisher(f64),

    #[error("profile weights sum to {0}, not 1")]
    UnnormalizedProfile(f64),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
