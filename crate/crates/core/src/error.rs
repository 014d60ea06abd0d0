//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("empty class `{name}`")]
    EmptyClass { name: String },

    #[error("need at least 2 classes, found {found}")]
    TooFewClasses { found: usize },

    #[error("inconsistent input shape for sample `{id}`: expected {expected}, found {found}")]
    InconsistentShape {
        id: String,
        expected: String,
        found: String,
    },

    #[error("label {label} out of range for {num_classes} classes")]
    LabelOutOfRange { label: usize, num_classes: usize },

    #[error("class `{name}` with {count} samples is too small to populate all three subsets")]
    ClassTooSmall { name: String, count: usize },

    #[error("intensity {value} outside declared source range [{lo}, {hi}]")]
    IntensityOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("{what} must be finite")]
    NonFinite { what: String },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("zero-norm feature vector for sample `{sample_id}`")]
    ZeroNormFeature { sample_id: String },

    #[error("{what} is empty")]
    Empty { what: String },

    #[error("invalid {what}: {reason}")]
    Invalid { what: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what: what.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
