//! Convex decomposition of nonconvex segment-arrangement cells by
//! axis-parallel rays shot from segment endpoints.

use std::f64::consts::{PI, TAU};

use super::dcel::{self, EdgeSource, InputSegment};
use super::{Arrangement, BoundaryEdge, Cell};
use crate::geom::{point_in_polygon, polygon_area2};
use crate::Point;

#[derive(Debug, Clone)]
pub struct ConvexSubcell {
    pub parent: usize,
    /// Counterclockwise convex polygon.
    pub polygon: Vec<Point>,
}

impl ConvexSubcell {
    pub fn area(&self) -> f64 {
        polygon_area2(&self.polygon) * 0.5
    }
}

const AXES: [Point; 4] = [
    Point { x: 1.0, y: 0.0 },
    Point { x: 0.0, y: 1.0 },
    Point { x: -1.0, y: 0.0 },
    Point { x: 0.0, y: -1.0 },
];

pub fn convex_decompose(cell: &Cell, arr: &Arrangement) -> Vec<ConvexSubcell> {
    if cell.convex {
        return vec![ConvexSubcell { parent: cell.id, polygon: cell.boundary.clone() }];
    }
    let d = &arr.dcel;
    let face = &d.faces[cell.face];
    let scale = arr.clip_box.max.max_abs().max(arr.clip_box.min.max_abs()).max(1.0);
    let tol = arr.tol.eps_geom * scale;

    let mut rays = Vec::new();
    for cyc in std::iter::once(&face.outer).chain(face.holes.iter()) {
        let n = cyc.len();
        for k in 0..n {
            let h_in = cyc[(k + n - 1) % n];
            let h_out = cyc[k];
            let v = d.half_edges[h_out].origin;
            if !d.endpoint[v] {
                continue;
            }
            let out_angle = d.angle(h_out);
            let back_angle = d.angle(d.half_edges[h_in].twin);
            let mut wedge = (back_angle - out_angle).rem_euclid(TAU);
            if wedge < 1e-12 {
                wedge = TAU;
            }
            let origin = d.vertices[v];
            for dir in split_rays(out_angle, wedge) {
                if let Some(t) = cast_ray(&cell.edges, origin, dir, tol) {
                    rays.push(InputSegment { a: origin, b: origin + dir * t, source: EdgeSource::Ray, mark_endpoints: false });
                }
            }
        }
    }

    let mut segs: Vec<InputSegment> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for e in &cell.edges {
        let key = ordered_key(e.a, e.b);
        if seen.insert(key) {
            segs.push(InputSegment { a: e.a, b: e.b, source: e.source, mark_endpoints: false });
        }
    }
    segs.extend(rays);
    let local = dcel::build(&segs, tol);
    let mut out = Vec::new();
    for face in local.faces.iter().skip(1) {
        let poly = local.cycle_points(&face.outer);
        let Some(probe) = interior_point(&poly) else { continue };
        if !cell.contains(probe) {
            continue;
        }
        out.push(ConvexSubcell { parent: cell.id, polygon: simplify(&poly) });
    }
    out
}

/// Fewest axis directions that cut a wedge opening counterclockwise from
/// `start` into angles of at most π. At most two are ever needed, which keeps
/// a cell with `k` endpoints to `(k + 1)²` pieces.
fn split_rays(start: f64, wedge: f64) -> Vec<Point> {
    const SLACK: f64 = 1e-9;
    if wedge <= PI + SLACK {
        return Vec::new();
    }
    let inside: Vec<(f64, Point)> = AXES
        .iter()
        .map(|&d| ((d.y.atan2(d.x) - start).rem_euclid(TAU), d))
        .filter(|&(r, _)| r > SLACK && r < wedge - SLACK)
        .collect();
    if let Some(&(_, d)) = inside.iter().find(|&&(r, _)| r <= PI + SLACK && wedge - r <= PI + SLACK) {
        return vec![d];
    }
    for (i, &(r1, d1)) in inside.iter().enumerate() {
        for &(r2, d2) in &inside[i + 1..] {
            let (r1, r2, d1, d2) = if r1 < r2 { (r1, r2, d1, d2) } else { (r2, r1, d2, d1) };
            if r1 <= PI + SLACK && r2 - r1 <= PI + SLACK && wedge - r2 <= PI + SLACK {
                return vec![d1, d2];
            }
        }
    }
    inside.into_iter().map(|(_, d)| d).collect()
}

fn ordered_key(a: Point, b: Point) -> (u64, u64, u64, u64) {
    let (p, q) = if (a.x, a.y) <= (b.x, b.y) { (a, b) } else { (b, a) };
    (p.x.to_bits(), p.y.to_bits(), q.x.to_bits(), q.y.to_bits())
}

/// First hit of the ray `o + t·dir`, `t > tol`, against the edges.
pub(crate) fn cast_ray(edges: &[BoundaryEdge], o: Point, dir: Point, tol: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for e in edges {
        let s = e.b - e.a;
        let denom = dir.cross(s);
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = e.a - o;
        let t = w.cross(s) / denom;
        let u = w.cross(dir) / denom;
        if t > tol && (-1e-12..=1.0 + 1e-12).contains(&u) && best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    best
}

/// A point strictly inside a simple polygon.
pub(crate) fn interior_point(poly: &[Point]) -> Option<Point> {
    let n = poly.len();
    if n < 3 {
        return None;
    }
    let c = poly.iter().fold(Point::origin(), |a, &p| a + p) * (1.0 / n as f64);
    if point_in_polygon(poly, c) {
        return Some(c);
    }
    for i in 0..n {
        let (a, b, cc) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
        if (b - a).cross(cc - b) > 0.0 {
            let g = (a + b + cc) * (1.0 / 3.0);
            if point_in_polygon(poly, g) {
                return Some(g);
            }
        }
    }
    None
}

/// Drop collinear vertices.
fn simplify(poly: &[Point]) -> Vec<Point> {
    let n = poly.len();
    let out: Vec<Point> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            let scale = (b - a).norm() * (c - b).norm();
            (b - a).cross(c - b).abs() > 1e-12 * scale
        })
        .map(|i| poly[i])
        .collect();
    if out.len() >= 3 {
        out
    } else {
        poly.to_vec()
    }
}
