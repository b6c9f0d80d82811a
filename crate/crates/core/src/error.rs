use std::path::PathBuf;

use thiserror::Error;

use crate::grid::{EdgeIdx, QuadIdx, VertexIdx};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A named grid or curve object, used to point at the offending item in
/// error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    CurveIndex(i64),
    Vertex(VertexIdx),
    Edge(EdgeIdx),
    Quad(QuadIdx),
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::CurveIndex(i) => write!(f, "curve index {i}"),
            Location::Vertex(v) => write!(f, "vertex {v}"),
            Location::Edge(e) => write!(f, "edge {e}"),
            Location::Quad(q) => write!(f, "quad {q}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is outside the domain")]
    IndexOutOfDomain(Location),

    #[error("{0} lies on the domain boundary")]
    BoundaryVertex(VertexIdx),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("curves intersect at {0}: co-normal vanishes")]
    IntersectingCurves(VertexIdx),

    #[error("degenerate metric on {quad}: omega = {value:e}")]
    DegenerateMetric { quad: QuadIdx, value: f64 },

    #[error("degenerate orientation: {0}")]
    DegenerateOrientation(String),

    #[error("inadmissible singular vertex {0}")]
    InadmissibleVertex(VertexIdx),

    #[error("parameter ({u}, {v}) out of range")]
    OutOfRange { u: f64, v: f64 },

    #[error("non-generic cell ({i}, {j}): omega vanishes at a corner")]
    NonGenericCell { i: usize, j: usize },

    #[error("degenerate direction at ({u}, {v}): projected derivative vanishes")]
    DegenerateDirection { u: f64, v: f64 },

    #[error("non-generic chain: tangency holds identically near ({u}, {v})")]
    NonGenericChain { u: f64, v: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("patches do not share the given edge")]
    SharedEdgeMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
