//! Error taxonomy shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected configuration (zero classes, zero duration, bad budgets, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A file failed to parse under one of the documented formats.
    #[error("format error in {path}: {detail}")]
    Format { path: String, detail: String },

    /// A value violated a documented invariant; the message names it.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numeric parameter was outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Priority map collapsed to all zeros after factor products.
    #[error("degenerate priority map: all entries zero after normalization")]
    DegenerateMap,

    /// Proto-object set carries no usable area for interest-point budgeting.
    #[error("degenerate proto-objects: total area is zero")]
    DegenerateProto,

    /// Spatial entropy is undefined for an empty interest-point set.
    #[error("undefined entropy: empty interest-point set")]
    UndefinedEntropy,

    /// Joint activity distribution is undefined without activity frames.
    #[error("undefined distribution: landscape has zero activity frames")]
    UndefinedDistribution,

    /// Formula evaluated outside its valid regime.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
