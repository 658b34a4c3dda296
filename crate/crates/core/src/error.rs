use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("geometry error: {0}")]
    Geometry(String),

    /// Blocks that carry population but have no boundary polygon.
    #[error("join error: {} populated block(s) without geometry: {}", .0.len(), .0.join(", "))]
    Join(Vec<String>),

    #[error("empty distribution: {0}")]
    EmptyDistribution(String),

    #[error("no block contains the point ({lon}, {lat})")]
    NotFound { lon: f64, lat: f64 },

    #[error("degenerate geometry for block {fips}: no point accepted after {attempts} attempts")]
    DegenerateGeometry { fips: String, attempts: usize },

    #[error("projection domain error: {0}")]
    Domain(String),

    #[error("augmentation error: {0}")]
    Augment(String),

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("write failed: {0}")]
    Write(#[source] std::io::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's inputs rather than by the
    /// environment (e.g. a failing output sink).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Write(_))
    }
}

/// Maps a CSV error raised while reading `path`.
pub(crate) fn csv_read_error(path: &std::path::Path, err: csv::Error) -> Error {
    let row = err.position().map(|p| p.line() as usize).unwrap_or_default();
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        csv::ErrorKind::Utf8 { err, .. } => Error::Parse {
            row,
            message: format!("{}: invalid UTF-8: {err}", path.display()),
        },
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Parse {
            row,
            message: format!(
                "{}: expected {expected_len} fields, found {len}",
                path.display()
            ),
        },
        kind => Error::Parse {
            row,
            message: format!("{}: {kind:?}", path.display()),
        },
    }
}

pub(crate) fn csv_write_error(err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Write(e),
        kind => Error::Write(std::io::Error::other(format!("{kind:?}"))),
    }
}
