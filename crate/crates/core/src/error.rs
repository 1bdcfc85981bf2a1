use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Prüfer code: {0}")]
    InvalidCode(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid forest: {0}")]
    InvalidForest(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("coordinate {value} exceeds the supported magnitude {limit}")]
    CoordinateOutOfRange { value: i64, limit: i64 },

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("points {0}, {1}, {2} are collinear (point set not in general position)")]
    Collinear(usize, usize, usize),

    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("size mismatch: tree has {tree} vertices, configuration has {config}")]
    SizeMismatch { tree: usize, config: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "refusing to enumerate {trees} trees for n = {n} (limit n <= {limit}); pass force to override"
    )]
    EnumerationGuard { n: usize, limit: usize, trees: String },

    #[error("cumulant order {k} exceeds the guard {limit}")]
    CumulantGuard { k: usize, limit: usize },

    #[error("singular system: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },

    #[error("rank-deficient system: duplicate abscissa n = {0}")]
    DuplicateAbscissa(i64),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("non-finite input {0}")]
    NonFinite(f64),
}

/// Coarse classification used to map errors onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments or flags.
    Usage,
    /// Malformed or degenerate input data.
    InputData,
    /// A computation guard refused to run.
    Guard,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::CoordinateOutOfRange { .. }
            | Error::DuplicatePoint(..)
            | Error::Collinear(..)
            | Error::Parse { .. } => ErrorClass::InputData,
            Error::EnumerationGuard { .. } | Error::CumulantGuard { .. } => ErrorClass::Guard,
            _ => ErrorClass::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
