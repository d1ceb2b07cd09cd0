//! Critical placements: translation vectors, per-cell critical curves, and
//! the overlay of all curves whose size measures placement complexity.

mod chain;
mod circle;
mod overlay;
mod square;

pub use circle::circle_cell_curves;
pub use overlay::{pair_intersections, OverlayCounts, PairIntersections};
pub use square::{corner_curve, edge_curve, f_value, square_cell_curves};

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Primitives};
use crate::error::{Error, Result};
use crate::geom::{intersect_lines, LineIntersection, ToleranceConfig};
use crate::perimeter::ShapeKind;
use crate::{Line, Point, Rect, Segment};

/// Clustering granularity, validated against the shape's perimeter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon {
    value: f64,
}

impl Epsilon {
    pub fn new(shape: ShapeKind, value: f64) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() || value > shape.perimeter() / 4.0 {
            return Err(Error::EpsilonOutOfRange(value));
        }
        Ok(Self { value })
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VectorKind {
    /// Square corner, numbered counterclockwise from bottom-left.
    Corner { corner: usize },
    /// Interior point of a square side.
    Edge { side: usize },
    Angular { theta: f64 },
}

/// Offset from the shape center to a fixed boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationVector {
    pub index: usize,
    pub dx: f64,
    pub dy: f64,
    /// Perimeter coordinate of the boundary point.
    pub s: f64,
    #[serde(flatten)]
    pub kind: VectorKind,
}

impl TranslationVector {
    pub fn offset(&self) -> Point {
        Point::new(self.dx, self.dy)
    }

    pub fn is_corner(&self) -> bool {
        matches!(self.kind, VectorKind::Corner { .. })
    }
}

#[derive(Debug, Clone)]
pub struct TranslationVectorSet {
    pub shape: ShapeKind,
    pub eps: f64,
    /// Perimeter distance between consecutive vectors.
    pub spacing: f64,
    pub vectors: Vec<TranslationVector>,
}

pub fn translation_vectors(shape: ShapeKind, eps: Epsilon) -> TranslationVectorSet {
    let e = eps.value();
    let mut vectors = Vec::new();
    let spacing = match shape {
        ShapeKind::Square => {
            let m = (1.0 / e - 1e-9).ceil().max(1.0) as usize;
            for side in 0..4 {
                for j in 0..m {
                    let s = side as f64 + j as f64 / m as f64;
                    let o = shape.offset_at(s);
                    let kind = if j == 0 { VectorKind::Corner { corner: side } } else { VectorKind::Edge { side } };
                    vectors.push(TranslationVector { index: vectors.len(), dx: o.x, dy: o.y, s, kind });
                }
            }
            1.0 / m as f64
        }
        ShapeKind::Circle => {
            let m = (TAU / e - 1e-9).ceil().max(1.0) as usize;
            for j in 0..m {
                let theta = TAU * j as f64 / m as f64;
                vectors.push(TranslationVector {
                    index: j,
                    dx: theta.cos(),
                    dy: theta.sin(),
                    s: theta,
                    kind: VectorKind::Angular { theta },
                });
            }
            TAU / m as f64
        }
    };
    TranslationVectorSet { shape, eps: e, spacing, vectors }
}

/// Elliptic arc `center + R(rot)·(ax·cos t, ay·sin t)` for `t` running from
/// `t0` to `t1`, which may be decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticArc {
    pub center: Point,
    pub ax: f64,
    pub ay: f64,
    pub rot: f64,
    pub t0: f64,
    pub t1: f64,
}

impl EllipticArc {
    pub fn at_param(&self, t: f64) -> Point {
        let (s, c) = self.rot.sin_cos();
        let (x, y) = (self.ax * t.cos(), self.ay * t.sin());
        self.center + Point::new(c * x - s * y, s * x + c * y)
    }

    /// Point at fraction `u ∈ [0, 1]` along the arc.
    pub fn at(&self, u: f64) -> Point {
        self.at_param(self.t0 + (self.t1 - self.t0) * u)
    }

    pub fn derivative(&self, t: f64) -> Point {
        let (s, c) = self.rot.sin_cos();
        let (x, y) = (-self.ax * t.sin(), self.ay * t.cos());
        Point::new(c * x - s * y, s * x + c * y) * (self.t1 - self.t0)
    }

    /// Residual of the implicit ellipse equation at `p`.
    pub fn implicit_residual(&self, p: Point) -> f64 {
        let (s, c) = self.rot.sin_cos();
        let d = p - self.center;
        let (x, y) = (c * d.x + s * d.y, -s * d.x + c * d.y);
        (x / self.ax).powi(2) + (y / self.ay).powi(2) - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CurvePiece {
    Segment { a: Point, b: Point },
    Arc(EllipticArc),
}

impl CurvePiece {
    /// Point at fraction `u ∈ [0, 1]`.
    pub fn at(&self, u: f64) -> Point {
        match self {
            CurvePiece::Segment { a, b } => a.lerp(*b, u),
            CurvePiece::Arc(e) => e.at(u),
        }
    }

    pub fn start(&self) -> Point {
        self.at(0.0)
    }

    pub fn end(&self) -> Point {
        self.at(1.0)
    }

    pub fn reversed(&self) -> Self {
        match *self {
            CurvePiece::Segment { a, b } => CurvePiece::Segment { a: b, b: a },
            CurvePiece::Arc(e) => CurvePiece::Arc(EllipticArc { t0: e.t1, t1: e.t0, ..e }),
        }
    }

    /// Tangent (unnormalised) at fraction `u`.
    pub fn tangent(&self, u: f64) -> Point {
        match self {
            CurvePiece::Segment { a, b } => *b - *a,
            CurvePiece::Arc(e) => e.derivative(e.t0 + (e.t1 - e.t0) * u),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            CurvePiece::Segment { a, b } => a.dist(*b),
            CurvePiece::Arc(_) => {
                let n = 64;
                (0..n).map(|i| self.at(i as f64 / n as f64).dist(self.at((i + 1) as f64 / n as f64))).sum()
            }
        }
    }

    pub fn bbox(&self) -> Rect {
        let mut r = Rect::empty();
        match self {
            CurvePiece::Segment { a, b } => {
                r.include(*a);
                r.include(*b);
            }
            CurvePiece::Arc(e) => {
                // sampled hull plus the sagitta bound
                let n = 16;
                for i in 0..=n {
                    r.include(e.at(i as f64 / n as f64));
                }
                let dt = (e.t1 - e.t0).abs() / n as f64;
                r = r.expand(e.ax.max(e.ay) * dt * dt / 8.0);
            }
        }
        r
    }

    /// Distance from `p` to the piece.
    pub fn dist_to(&self, p: Point) -> f64 {
        match self {
            CurvePiece::Segment { a, b } => {
                if a == b {
                    a.dist(p)
                } else {
                    Segment { p: *a, q: *b }.dist_to(p)
                }
            }
            CurvePiece::Arc(_) => {
                let n = 32;
                let (mut best, mut bu) = (f64::INFINITY, 0.0);
                for i in 0..=n {
                    let u = i as f64 / n as f64;
                    let d = self.at(u).dist(p);
                    if d < best {
                        best = d;
                        bu = u;
                    }
                }
                // golden-section refinement around the best sample
                let (mut lo, mut hi) = ((bu - 1.0 / n as f64).max(0.0), (bu + 1.0 / n as f64).min(1.0));
                let g = 0.618_033_988_749_895;
                for _ in 0..60 {
                    let m1 = hi - g * (hi - lo);
                    let m2 = lo + g * (hi - lo);
                    if self.at(m1).dist(p) < self.at(m2).dist(p) {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                best.min(self.at(0.5 * (lo + hi)).dist(p))
            }
        }
    }
}

/// One connected chain of S(c, τ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurve {
    pub cell: usize,
    pub vector: TranslationVector,
    pub pieces: Vec<CurvePiece>,
    pub convex: bool,
}

impl CriticalCurve {
    pub fn start(&self) -> Point {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Point {
        self.pieces[self.pieces.len() - 1].end()
    }

    /// Points along the curve at spacing at most `step`.
    pub fn sample(&self, step: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let n = ((p.length() / step).ceil() as usize).max(1);
            for i in 0..=n {
                out.push(p.at(i as f64 / n as f64));
            }
        }
        out
    }
}

/// A region where the boundary piece through τ has length exactly ε on a
/// two-dimensional set of placements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateRegion {
    pub cell: usize,
    pub vector: usize,
    /// Placement-space polygon, counterclockwise.
    pub polygon: Vec<Point>,
}

/// Where curves are computed (the clip box) and where they are complete
/// (everything away from the clip frame).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub clip: Rect,
    pub region: Rect,
}

/// Frame for a scene: the data's bounding box padded so every placement that
/// touches the data lies in `region`, and `clip` padded further.
pub fn frame_for(primitives: &Primitives, eps: f64, tol: &ToleranceConfig) -> Frame {
    let mut data = Rect::empty();
    match primitives {
        Primitives::Lines(lines) => {
            for i in 0..lines.len() {
                for j in 0..i {
                    if let Ok(LineIntersection::Point(p)) = intersect_lines(&lines[i], &lines[j], tol) {
                        data.include(p);
                    }
                }
            }
            if data.is_empty() {
                for l in lines {
                    data.include(l.anchor());
                }
            }
        }
        Primitives::Segments(segs) => {
            for s in segs {
                data.include(s.p);
                data.include(s.q);
            }
        }
    }
    if data.is_empty() {
        data = Rect::new(Point::origin(), Point::origin());
    }
    let region = data.expand(1.0 + eps);
    Frame { clip: region.expand(crate::arrangement::default_margin(eps)), region }
}

/// Build the arrangement of a scene in its frame.
pub fn arrangement_for(primitives: &Primitives, eps: f64, tol: ToleranceConfig) -> Result<(Arrangement, Frame)> {
    let frame = frame_for(primitives, eps, &tol);
    let arr = match primitives {
        Primitives::Lines(l) => Arrangement::from_lines(l, frame.clip, tol)?,
        Primitives::Segments(s) => Arrangement::from_segments(s, frame.clip, tol)?,
    };
    // the clip box may have grown; keep the region well inside it
    let clip = arr.clip_box;
    let frame = Frame { clip, region: frame.region };
    Ok((arr, frame))
}

/// Curves of S(τ): the union of S(c, τ) over all cells.
pub fn collect_s(arr: &Arrangement, set: &TranslationVectorSet, tv: &TranslationVector) -> Result<(Vec<CriticalCurve>, Vec<DegenerateRegion>)> {
    let per_cell: Vec<Result<(Vec<CriticalCurve>, Vec<DegenerateRegion>)>> =
        (0..arr.cells.len()).into_par_iter().map(|c| cell_curves(arr, set, tv, c)).collect();
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for r in per_cell {
        let (c, w) = r?;
        curves.extend(c);
        warnings.extend(w);
    }
    Ok((curves, warnings))
}

fn cell_curves(arr: &Arrangement, set: &TranslationVectorSet, tv: &TranslationVector, cell: usize) -> Result<(Vec<CriticalCurve>, Vec<DegenerateRegion>)> {
    match set.shape {
        ShapeKind::Square => Ok(square_cell_curves(arr, cell, tv, set.spacing, set.eps)),
        ShapeKind::Circle => {
            if !arr.cells[cell].convex {
                return Err(Error::Unsupported("circle placements need a line arrangement".into()));
            }
            Ok((circle_cell_curves(arr, cell, tv, set.spacing, set.eps)?, Vec::new()))
        }
    }
}

/// All critical curves plus their overlay.
#[derive(Debug, Clone)]
pub struct PlacementArrangement {
    pub shape: ShapeKind,
    pub eps: f64,
    pub frame: Frame,
    pub vectors: TranslationVectorSet,
    pub curves: Vec<CriticalCurve>,
    /// Corner-coincidence translates of the input lines, clipped to the region.
    pub line_translates: Vec<Segment>,
    pub degenerate: Vec<DegenerateRegion>,
    pub counts: OverlayCounts,
}

impl PlacementArrangement {
    /// Total combinatorial size `V + E + F`.
    pub fn complexity(&self) -> usize {
        self.counts.vertices + self.counts.edges + self.counts.faces
    }
}

pub fn build_placement_arrangement(
    arr: &Arrangement,
    frame: Frame,
    eps: Epsilon,
    shape: ShapeKind,
    include_line_translates: bool,
) -> Result<PlacementArrangement> {
    if shape == ShapeKind::Circle && eps.value() >= 1.0 {
        return Err(Error::EpsilonTooLarge(eps.value()));
    }
    let set = translation_vectors(shape, eps);
    let mut curves = Vec::new();
    let mut degenerate = Vec::new();
    for tv in &set.vectors {
        let (c, w) = collect_s(arr, &set, tv)?;
        curves.extend(c);
        degenerate.extend(w);
    }
    let mut line_translates = Vec::new();
    if include_line_translates && shape == ShapeKind::Square {
        if let Primitives::Lines(lines) = &arr.primitives {
            line_translates = corner_translates(lines, &frame.region);
        }
    }
    let counts = overlay::overlay_counts(&curves, &line_translates, frame.clip);
    Ok(PlacementArrangement { shape, eps: eps.value(), frame, vectors: set, curves, line_translates, degenerate, counts })
}

/// Placements with a square corner on an input line: four translates per line.
fn corner_translates(lines: &[Line], region: &Rect) -> Vec<Segment> {
    let mut out = Vec::new();
    for l in lines {
        for c in crate::perimeter::SQUARE_CORNERS {
            let t = l.translate(-c);
            if let Some((a, b)) = region.clip_line(t.anchor(), t.direction()) {
                if b > a {
                    out.push(Segment { p: t.anchor() + t.direction() * a, q: t.anchor() + t.direction() * b });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_vectors() {
        let set = translation_vectors(ShapeKind::Square, Epsilon::new(ShapeKind::Square, 0.25).unwrap());
        assert_eq!(set.vectors.len(), 16);
        let corners: Vec<_> = set.vectors.iter().filter(|v| v.is_corner()).collect();
        assert_eq!(corners.len(), 4);
        assert!(corners.iter().all(|v| v.dx.abs() == 0.5 && v.dy.abs() == 0.5));
        let set = translation_vectors(ShapeKind::Square, Epsilon::new(ShapeKind::Square, 1.0).unwrap());
        assert_eq!(set.vectors.len(), 4);
        assert!(set.vectors.iter().all(|v| v.is_corner()));
    }

    #[test]
    fn non_integer_ratio_covers_every_window() {
        for &e in &[0.3, 0.7, 0.15] {
            let set = translation_vectors(ShapeKind::Square, Epsilon::new(ShapeKind::Square, e).unwrap());
            assert!(set.spacing <= e);
            let s: Vec<f64> = set.vectors.iter().map(|v| v.s).collect();
            for w in 0..400 {
                let a = 4.0 * w as f64 / 400.0;
                let inside = s
                    .iter()
                    .filter(|&&x| {
                        let d = (x - a).rem_euclid(4.0);
                        d > 0.0 && d < e
                    })
                    .count();
                assert!((1..=2).contains(&inside), "eps {e} window {a}: {inside}");
            }
        }
    }

    #[test]
    fn circle_vectors() {
        let set = translation_vectors(ShapeKind::Circle, Epsilon::new(ShapeKind::Circle, PI / 8.0).unwrap());
        assert_eq!(set.vectors.len(), 16);
        assert!((set.spacing - PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_range() {
        assert!(Epsilon::new(ShapeKind::Square, 0.0).is_err());
        assert!(Epsilon::new(ShapeKind::Square, 1.5).is_err());
        assert!(Epsilon::new(ShapeKind::Circle, 1.5).is_ok());
    }
}
