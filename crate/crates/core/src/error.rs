use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A design input is outside its admissible range.
    #[error("invalid input `{param}`: {reason}")]
    InvalidInput { param: &'static str, reason: String },

    /// The inputs are admissible individually but produce a degenerate or
    /// unbuildable geometry (collinear axes, vertical end cut, ...).
    #[error("invalid geometry ({param}): {reason}")]
    InvalidGeometry { param: &'static str, reason: String },

    #[error("pattern self-intersects: {0}")]
    SelfIntersection(String),

    #[error("corner gap of {gap:.3e} mm between `{from}` and `{to}`")]
    CornerGap { from: String, to: String, gap: f64 },

    #[error("no intersection: {0}")]
    NoIntersection(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn geometry(param: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidGeometry {
            param,
            reason: reason.into(),
        }
    }

    pub(crate) fn input(param: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            param,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
