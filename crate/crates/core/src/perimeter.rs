//! Arc-length coordinates on the boundary of the unit square and unit circle.
//!
//! `s = 0` sits at the bottom-left corner of the square (or at angle 0 on the
//! circle) and grows counterclockwise.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Square,
    Circle,
}

impl ShapeKind {
    pub fn perimeter(self) -> f64 {
        match self {
            ShapeKind::Square => 4.0,
            ShapeKind::Circle => TAU,
        }
    }

    /// Boundary point relative to the center.
    pub fn offset_at(self, s: f64) -> Point {
        match self {
            ShapeKind::Square => square_offset(s),
            ShapeKind::Circle => Point::new(s.cos(), s.sin()),
        }
    }

    /// Coordinate of a boundary offset, or `None` when it is off the boundary.
    pub fn coord_of_offset(self, v: Point, eps: f64) -> Option<f64> {
        match self {
            ShapeKind::Square => square_coord(v, eps),
            ShapeKind::Circle => {
                if (v.norm() - 1.0).abs() > eps {
                    return None;
                }
                Some(v.y.atan2(v.x).rem_euclid(TAU))
            }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "square" => Some(ShapeKind::Square),
            "circle" => Some(ShapeKind::Circle),
            _ => None,
        }
    }
}

/// Square corners relative to the center, counterclockwise from bottom-left.
pub const SQUARE_CORNERS: [Point; 4] = [
    Point { x: -0.5, y: -0.5 },
    Point { x: 0.5, y: -0.5 },
    Point { x: 0.5, y: 0.5 },
    Point { x: -0.5, y: 0.5 },
];

/// Counterclockwise direction of each square side.
pub const SQUARE_SIDE_DIRS: [Point; 4] = [
    Point { x: 1.0, y: 0.0 },
    Point { x: 0.0, y: 1.0 },
    Point { x: -1.0, y: 0.0 },
    Point { x: 0.0, y: -1.0 },
];

fn square_offset(s: f64) -> Point {
    let s = s.rem_euclid(4.0);
    let side = (s.floor() as usize).min(3);
    let t = s - side as f64;
    SQUARE_CORNERS[side] + SQUARE_SIDE_DIRS[side] * t
}

fn square_coord(v: Point, eps: f64) -> Option<f64> {
    if (v.max_abs() - 0.5).abs() > eps {
        return None;
    }
    let s = if (v.y + 0.5).abs() <= eps && v.x < 0.5 - eps {
        v.x + 0.5
    } else if (v.x - 0.5).abs() <= eps && v.y < 0.5 - eps {
        1.0 + v.y + 0.5
    } else if (v.y - 0.5).abs() <= eps && v.x > -0.5 + eps {
        2.0 + 0.5 - v.x
    } else {
        3.0 + 0.5 - v.y
    };
    let s = s.clamp(0.0, 4.0);
    Some(if s >= 4.0 { 0.0 } else { s })
}

/// Position of a point on the boundary of a shape with a given center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterCoord {
    pub shape: ShapeKind,
    pub center: Point,
    pub s: f64,
}

impl PerimeterCoord {
    pub fn perimeter(&self) -> f64 {
        self.shape.perimeter()
    }

    /// Inverse mapping back to the plane.
    pub fn to_point(&self) -> Point {
        self.center + self.shape.offset_at(self.s)
    }
}

pub fn perimeter_coordinate(shape: ShapeKind, center: Point, p: Point, eps_geom: f64) -> Result<PerimeterCoord, GeomError> {
    let s = shape.coord_of_offset(p - center, eps_geom).ok_or(GeomError::NotOnBoundary)?;
    Ok(PerimeterCoord { shape, center, s })
}

/// Shorter way around the boundary between two coordinates.
pub fn boundary_distance(a: &PerimeterCoord, b: &PerimeterCoord) -> Result<f64, GeomError> {
    if a.shape != b.shape || a.center != b.center {
        return Err(GeomError::ShapeMismatch);
    }
    Ok(cyclic_distance(a.s, b.s, a.perimeter()))
}

pub fn cyclic_distance(a: f64, b: f64, len: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(len);
    d.min(len - d)
}
