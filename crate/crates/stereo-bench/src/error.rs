use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("truncated file: {0}")]
    TruncatedFile(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("malformed value for `{key}`: {value}")]
    MalformedValue { key: String, value: String },
    #[error("no usable scene found under {0}")]
    EmptyDataset(PathBuf),
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    UnsupportedChannels(u32),
    #[error("resize factor {factor} collapses {width}x{height} to an empty image")]
    DegenerateSize { width: usize, height: usize, factor: f64 },
    #[error("image too small: need at least {min_width}x{min_height}, got {width}x{height}")]
    TooSmall { width: usize, height: usize, min_width: usize, min_height: usize },
    #[error("window has no in-bounds overlap")]
    EmptyOverlap,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("unsupported method/cost combination: {0}")]
    UnsupportedCombination(String),
    #[error("no jointly valid pixels to evaluate")]
    NoValidPixels,
    #[error("empty result list")]
    EmptyResults,
    #[error("invalid configuration: {0}")]
    Config(String),
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

    pub(crate) fn dims(left: impl std::fmt::Display, right: impl std::fmt::Display) -> Self {
        Error::DimensionMismatch { left: left.to_string(), right: right.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
