use thiserror::Error;

use crate::lattice::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex {0} lies outside the box")]
    OutsideBox(Vertex),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration cap exceeded: {free} free vertices, cap {cap}")]
    EnumerationCap { free: usize, cap: usize },

    #[error("resource guard exceeded: {0}")]
    Guard(String),

    #[error("configuration is not feasible")]
    Infeasible,

    #[error("anchor {0} is odd")]
    AnchorOdd(Vertex),

    #[error("anchor {0} is vacant")]
    AnchorVacant(Vertex),

    #[error("odd boundary vertices are not all occupied")]
    BoundaryUnsatisfied,

    #[error("box radius must be at least 2 for cutset extraction")]
    BoxTooSmall,

    #[error("edge set does not separate the anchor from the boundary")]
    NonSeparating,

    #[error("conditioning event has zero measure")]
    ZeroMeasure,

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("retry cap of {0} exhausted while building dominating sets")]
    RetryCap(usize),

    #[error("malformed approximation input: {0}")]
    MalformedInput(String),

    #[error("coupling from the past did not coalesce by epoch {epoch} ({sweeps} sweeps)")]
    Coalescence { epoch: u32, sweeps: u64 },

    #[error("cannot render snapshot for d = {0}; only d = 2 is supported")]
    RenderDimension(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
