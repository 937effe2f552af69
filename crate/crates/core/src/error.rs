use thiserror::Error;

use crate::geometry::Point;

/// Errors raised while building or evaluating an interpolant.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("cannot associate a triangle with node {node}: {reason}")]
    Association { node: usize, reason: String },

    #[error("least-squares fit failed at node {node}: {reason}")]
    Fit { node: usize, reason: String },

    #[error("point ({}, {}) is not covered by any support disk", .0.x, .0.y)]
    Coverage(Point),

    #[error("derivative evaluation failed: {0}")]
    Evaluator(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for errors caused by bad caller input rather than numerical failure.
    pub fn is_argument(&self) -> bool {
        matches!(self, Error::Argument(_) | Error::Parse(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
