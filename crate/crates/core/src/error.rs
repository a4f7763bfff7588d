use std::path::PathBuf;

/// Errors produced by the clustering toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A numeric input was NaN or infinite.
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    /// A coordinate or parameter fell outside its permitted range.
    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// Not enough samples for the requested estimate.
    #[error("{what} needs at least {needed} samples, got {got}")]
    TooFewSamples {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// A coordinate dimension has zero variance and cannot be standardized.
    #[error("dimension {dim} has zero variance")]
    ZeroVariance { dim: usize },

    /// Two inputs that must agree in size do not.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// One element of a collection has a different length from the first.
    #[error("series {index} has length {got}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    /// An index referred past the end of a matrix.
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    /// A parameter violates its precondition.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A matrix violates symmetry, zero diagonal or nonnegativity.
    #[error("invalid distance matrix at ({i}, {j}): {reason}")]
    InvalidMatrix {
        i: usize,
        j: usize,
        reason: &'static str,
    },

    /// A CSV input could not be interpreted.
    #[error("{path}: row {row}, column {column}: {reason}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        reason: String,
    },

    /// A required CSV column is absent from the header.
    #[error("{path}: missing required column {column:?}")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short stable identifier for the error class, used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite { .. }
            | Error::OutOfRange { .. }
            | Error::Empty(_)
            | Error::TooFewSamples { .. }
            | Error::ZeroVariance { .. }
            | Error::DimensionMismatch { .. }
            | Error::LengthMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidMatrix { .. } => "domain",
            Error::InvalidParameter { .. } => "parameter",
            Error::Parse { .. } | Error::MissingColumn { .. } | Error::Csv { .. } => "input",
            Error::Io { .. } => "io",
            Error::Json(_) => "serialization",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
