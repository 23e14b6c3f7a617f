use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("walls collide at t = {t:e} (width {width:e})")]
    WallCollision { t: f64, width: f64 },

    #[error("{what} = {value:e} outside valid domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field is in the {found} frame, expected {expected}")]
    FrameMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("walls are parallel; intersection point is at infinity")]
    ParallelWalls,

    #[error("rescaled time {tau:e} beyond attainable bound {bound:e}")]
    OutOfRange { tau: f64, bound: f64 },

    #[error("operation unsupported for this trajectory: {0}")]
    Unsupported(&'static str),

    #[error("coordinate map is singular at t = {t:e}")]
    Singularity { t: f64 },

    #[error("revival tau' = {requested} unreachable; supremum is {supremum:e}")]
    UnreachableTau { requested: String, supremum: f64 },

    #[error("packet too close to wall: only {kept:.4} of probability kept after clipping")]
    DegeneratePacket { kept: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
