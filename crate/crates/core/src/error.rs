use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure classes, used by callers that map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    AcceptanceLoop,
    SchemaMismatch,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error in {path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error("no rows")]
    NoRows,

    #[error("ragged row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: u64,
        expected: usize,
        found: usize,
    },

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("column `{column}`, row {row}: cannot parse `{value}` as a finite number")]
    UnparseableNumber {
        column: String,
        row: usize,
        value: String,
    },

    #[error("column `{column}`, row {row}: binary label {label} disagrees with traffic type `{traffic_type}`")]
    LabelMismatch {
        column: String,
        row: usize,
        label: String,
        traffic_type: String,
    },

    #[error("no informative features: every feature column is constant")]
    NoInformativeFeatures,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample size {num} out of range 1..={rows}")]
    SampleSizeOutOfRange { num: usize, rows: usize },

    #[error("similarity undecidable: {buckets} bucket(s) remain after pooling")]
    SimilarityUndecidable { buckets: usize },

    #[error(
        "no similar sample after {attempts} attempts (best chi-square {best_statistic:.6}, critical value {threshold:.6})"
    )]
    AttemptsExhausted {
        attempts: u32,
        best_statistic: f64,
        threshold: f64,
    },

    #[error("dataset has a single binary class ({present}); balancing needs both")]
    SingleBinaryClass { present: u8 },

    #[error("feature schema mismatch: {0}")]
    FeatureMismatch(String),

    #[error("dimension mismatch: model expects {expected} features, data has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("JSON error")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::AttemptsExhausted { .. } => ErrorClass::AcceptanceLoop,
            Error::FeatureMismatch(_) | Error::DimensionMismatch { .. } => {
                ErrorClass::SchemaMismatch
            }
            Error::Numerical(_) => ErrorClass::Numerical,
            _ => ErrorClass::Input,
        }
    }
}
