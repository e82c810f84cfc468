use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by geometry, quadrature, reconstruction and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate tangent at zeta = {zeta}: |gamma'| = {speed:e}")]
    DegenerateTangent { zeta: f64, speed: f64 },

    #[error("curve is not counterclockwise (signed area {area:e})")]
    Orientation { area: f64 },

    #[error("field of shape {found:?} does not match grid shape {expected:?}")]
    GridMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("fields have different shapes: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),

    #[error("non-finite value at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("full-boundary reconstruction requires zeta_max = 1, got {zeta_max}")]
    PartialGridSupplied { zeta_max: f64 },

    #[error("partial reconstruction requires zeta_max < 1; use the full-boundary variant")]
    FullGridSupplied,

    #[error("point ({x}, {y}) is not strictly inside the domain")]
    PointOutsideDomain { x: f64, y: f64 },

    #[error("source ({x}, {y}) lies inside the domain")]
    SourceInsideDomain { x: f64, y: f64 },

    #[error("source is {distance} from the boundary, margin {margin} required")]
    SourceTooClose { distance: f64, margin: f64 },

    #[error("reference field has zero norm; relative error undefined")]
    ZeroReference,

    #[error("a reference solution is required for {0}")]
    MissingReference(&'static str),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
