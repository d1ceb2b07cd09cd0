//! Critical placements of a unit square or unit circle over arrangements of
//! lines and segments, brute-force oracles to check them, worst-case instance
//! generators, and a grid-based junction detector for trajectory data.

pub mod arrangement;
pub mod error;
pub mod generators;
pub mod io;
pub mod geom;
pub mod junctions;
pub mod oracle;
pub mod perimeter;
pub mod placement;

pub use error::{Error, GeomError, Result};

pub type Point = geom::Point2<f64>;
pub type Line = geom::Line2<f64>;
pub type Segment = geom::Segment2<f64>;
pub type Polyline = geom::Polyline2<f64>;
pub type Rect = geom::Rect<f64>;

pub type Point32 = geom::Point2<f32>;
pub type Line32 = geom::Line2<f32>;
pub type Segment32 = geom::Segment2<f32>;
