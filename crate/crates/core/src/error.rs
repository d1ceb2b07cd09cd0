use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("line anchors must be distinct finite points")]
    DegenerateLine,
    #[error("segment endpoints must be distinct finite points")]
    DegenerateSegment,
    #[error("polyline needs at least two vertices")]
    ShortPolyline,
    #[error("polyline has repeated consecutive vertices")]
    RepeatedVertex,
    #[error("lines are coincident")]
    Coincident,
    #[error("point is not on the shape boundary")]
    NotOnBoundary,
    #[error("perimeter coordinates belong to different shapes")]
    ShapeMismatch,
    #[error("tolerances must satisfy 0 < eps_geom < eps_verify < epsilon")]
    BadTolerance,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("input is degenerate even after perturbation: {0}")]
    DegenerateInput(String),
    #[error("point lies on an arrangement edge")]
    OnBoundary,
    #[error("point lies outside the clip box")]
    OutsideClipBox,
    #[error("epsilon {0} out of range for this shape")]
    EpsilonOutOfRange(f64),
    #[error("epsilon {0} too large: circle placements require epsilon < 1")]
    EpsilonTooLarge(f64),
    #[error("no line in a required direction")]
    Unbounded,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
