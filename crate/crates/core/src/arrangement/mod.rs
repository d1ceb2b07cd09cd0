//! Arrangements of lines and of line segments, clipped to a box.

mod dcel;
mod decompose;

pub use dcel::{Dcel, EdgeSource, Face, HalfEdge, InputSegment};
pub use decompose::{convex_decompose, ConvexSubcell};

use crate::error::{Error, Result};
use crate::geom::{
    dist_to_polygon_boundary, intersect_lines, is_convex_ccw, point_in_polygon, polygon_area2, LineIntersection,
    ToleranceConfig,
};
use crate::{Line, Point, Rect, Segment};

/// Input primitives an arrangement was built from.
#[derive(Debug, Clone)]
pub enum Primitives {
    Lines(Vec<Line>),
    Segments(Vec<Segment>),
}

impl Primitives {
    pub fn len(&self) -> usize {
        match self {
            Primitives::Lines(l) => l.len(),
            Primitives::Segments(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn translate(&self, v: Point) -> Self {
        match self {
            Primitives::Lines(l) => Primitives::Lines(l.iter().map(|x| x.translate(v)).collect()),
            Primitives::Segments(s) => {
                Primitives::Segments(s.iter().map(|x| Segment { p: x.p + v, q: x.q + v }).collect())
            }
        }
    }
}

/// One boundary edge of a cell with its supporting primitive.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryEdge {
    pub a: Point,
    pub b: Point,
    pub source: EdgeSource,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub id: usize,
    /// Counterclockwise outer boundary.
    pub boundary: Vec<Point>,
    /// Clockwise hole boundaries.
    pub holes: Vec<Vec<Point>>,
    /// All boundary edges, outer and holes.
    pub edges: Vec<BoundaryEdge>,
    pub convex: bool,
    /// Number of input segment endpoints on the boundary.
    pub endpoint_count: usize,
    pub(crate) face: usize,
}

impl Cell {
    pub fn area(&self) -> f64 {
        polygon_area2(&self.boundary) * 0.5 + self.holes.iter().map(|h| polygon_area2(h) * 0.5).sum::<f64>()
    }

    pub fn bbox(&self) -> Rect {
        let mut r = Rect::empty();
        for &p in &self.boundary {
            r.include(p);
        }
        r
    }

    /// Strictly inside the outer boundary and outside every hole.
    pub fn contains(&self, p: Point) -> bool {
        point_in_polygon(&self.boundary, p) && !self.holes.iter().any(|h| point_in_polygon(h, p))
    }

    pub fn dist_to_boundary(&self, p: Point) -> f64 {
        self.edges
            .iter()
            .map(|e| if e.a == e.b { e.a.dist(p) } else { Segment { p: e.a, q: e.b }.dist_to(p) })
            .fold(f64::INFINITY, f64::min)
    }

    /// Distinct boundary vertices.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.edges.iter().map(|e| e.a).collect();
        v.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        v.dedup();
        v
    }
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    pub primitives: Primitives,
    pub clip_box: Rect,
    pub dcel: Dcel,
    pub cells: Vec<Cell>,
    pub tol: ToleranceConfig,
    /// Set when inputs had to be nudged into general position.
    pub perturbed: bool,
}

/// Extra room around the data so every placement touching the data fits.
pub fn default_margin(eps: f64) -> f64 {
    2.0 + eps
}

/// Shift duplicate and concurrent lines apart by multiples of `10·eps_geom`.
pub fn perturb_lines(lines: &[Line], tol: &ToleranceConfig) -> (Vec<Line>, bool) {
    let step = 10.0 * tol.eps_geom;
    let mut out: Vec<Line> = Vec::with_capacity(lines.len());
    let mut perturbed = false;
    for (i, l) in lines.iter().enumerate() {
        let mut cand = *l;
        for attempt in 0..16 {
            if !violates(&out, &cand, tol) {
                break;
            }
            perturbed = true;
            cand = Line { c: l.c + step * (i + 1) as f64 * (attempt + 1) as f64, ..*l };
        }
        out.push(cand);
    }
    (out, perturbed)
}

fn violates(existing: &[Line], cand: &Line, tol: &ToleranceConfig) -> bool {
    for (j, a) in existing.iter().enumerate() {
        let pa = match intersect_lines(a, cand, tol) {
            Err(_) => return true,
            Ok(LineIntersection::Parallel) => continue,
            Ok(LineIntersection::Point(p)) => p,
        };
        for b in &existing[..j] {
            if let Ok(LineIntersection::Point(pb)) = intersect_lines(a, b, tol) {
                if pa.dist(pb) <= tol.eps_geom * pa.max_abs().max(1.0) {
                    return true;
                }
            }
        }
    }
    false
}

impl Arrangement {
    /// Arrangement of infinite lines clipped to a box that is grown to hold
    /// every pairwise intersection plus a margin.
    pub fn from_lines(lines: &[Line], clip: Rect, tol: ToleranceConfig) -> Result<Self> {
        let (lines, perturbed) = perturb_lines(lines, &tol);
        let mut bounds = clip;
        for l in &lines {
            bounds.include(l.anchor());
        }
        for i in 0..lines.len() {
            for j in 0..i {
                match intersect_lines(&lines[i], &lines[j], &tol) {
                    Ok(LineIntersection::Point(p)) => bounds.include(p),
                    Ok(LineIntersection::Parallel) => {}
                    Err(_) => return Err(Error::DegenerateInput(format!("lines {j} and {i} coincide"))),
                }
            }
        }
        if bounds.is_empty() {
            bounds = Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        }
        let clip_box = if bounds.min == clip.min && bounds.max == clip.max { clip } else { bounds.expand(1.0) };
        let mut segs = clip_edges(&clip_box);
        for (i, l) in lines.iter().enumerate() {
            let o = l.anchor();
            let d = l.direction();
            if let Some((t0, t1)) = clip_box.clip_line(o, d) {
                if t1 - t0 > tol.eps_geom {
                    segs.push(InputSegment { a: o + d * t0, b: o + d * t1, source: EdgeSource::Primitive(i), mark_endpoints: false });
                }
            }
        }
        Self::assemble(Primitives::Lines(lines), clip_box, &segs, tol, perturbed)
    }

    /// Arrangement of segments; cells may be nonconvex and have holes.
    pub fn from_segments(segments: &[Segment], clip: Rect, tol: ToleranceConfig) -> Result<Self> {
        let mut bounds = clip;
        for s in segments {
            bounds.include(s.p);
            bounds.include(s.q);
        }
        if bounds.is_empty() {
            bounds = Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        }
        let clip_box = if bounds.min == clip.min && bounds.max == clip.max { clip } else { bounds.expand(1.0) };
        let mut segs = clip_edges(&clip_box);
        for (i, s) in segments.iter().enumerate() {
            if s.p.dist(s.q) <= tol.eps_geom {
                return Err(Error::DegenerateInput(format!("segment {i} has zero length")));
            }
            segs.push(InputSegment { a: s.p, b: s.q, source: EdgeSource::Primitive(i), mark_endpoints: true });
        }
        Self::assemble(Primitives::Segments(segments.to_vec()), clip_box, &segs, tol, false)
    }

    fn assemble(primitives: Primitives, clip_box: Rect, segs: &[InputSegment], tol: ToleranceConfig, perturbed: bool) -> Result<Self> {
        let lines_only = matches!(primitives, Primitives::Lines(_));
        let dcel = dcel::build(segs, tol.eps_geom * clip_box.max.max_abs().max(clip_box.min.max_abs()).max(1.0));
        let mut cells = Vec::with_capacity(dcel.faces.len().saturating_sub(1));
        for (f, face) in dcel.faces.iter().enumerate().skip(1) {
            let boundary = dcel.cycle_points(&face.outer);
            let holes: Vec<Vec<Point>> = face.holes.iter().map(|h| dcel.cycle_points(h)).collect();
            let mut edges = Vec::new();
            let mut endpoints = std::collections::BTreeSet::new();
            for cyc in std::iter::once(&face.outer).chain(face.holes.iter()) {
                for &h in cyc {
                    let he = &dcel.half_edges[h];
                    edges.push(BoundaryEdge { a: dcel.vertices[he.origin], b: dcel.vertices[dcel.target(h)], source: he.source });
                    if dcel.endpoint[he.origin] {
                        endpoints.insert(he.origin);
                    }
                }
            }
            // line cells are convex by construction; snapping can leave tiny reflex turns
            let convex = holes.is_empty() && (lines_only || is_convex_ccw(&boundary, 1e-12));
            cells.push(Cell { id: cells.len(), boundary, holes, edges, convex, endpoint_count: endpoints.len(), face: f });
        }
        if cells.iter().any(|c| c.area() <= 0.0) {
            return Err(Error::DegenerateInput("zero-area cell".into()));
        }
        Ok(Self { primitives, clip_box, dcel, cells, tol, perturbed })
    }

    pub fn vertex_count(&self) -> usize {
        self.dcel.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dcel.edge_count()
    }

    /// Faces including the unbounded one.
    pub fn face_count(&self) -> usize {
        self.cells.len() + 1
    }

    /// `V − E + F`, which equals `1 + components`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn components(&self) -> usize {
        self.dcel.components
    }

    /// Vertices off the clip box boundary.
    pub fn interior_vertices(&self) -> Vec<Point> {
        let b = &self.clip_box;
        let e = self.tol.eps_geom * b.max.max_abs().max(1.0);
        self.dcel
            .vertices
            .iter()
            .copied()
            .filter(|p| {
                (p.x - b.min.x).abs() > e && (p.x - b.max.x).abs() > e && (p.y - b.min.y).abs() > e && (p.y - b.max.y).abs() > e
            })
            .collect()
    }

    /// Cell containing `p`.
    pub fn locate(&self, p: Point) -> Result<usize> {
        if !self.clip_box.contains(p) {
            return Err(Error::OutsideClipBox);
        }
        for c in &self.cells {
            if !c.bbox().expand(self.tol.eps_geom).contains(p) {
                continue;
            }
            if c.dist_to_boundary(p) <= self.tol.eps_geom {
                return Err(Error::OnBoundary);
            }
            if c.contains(p) {
                return Ok(c.id);
            }
        }
        Err(Error::OnBoundary)
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    /// Convex pieces of every cell: the cell itself when convex.
    pub fn convex_pieces(&self, id: usize) -> Vec<ConvexSubcell> {
        convex_decompose(&self.cells[id], self)
    }

    pub fn boundary_distance_ok(&self, p: Point) -> bool {
        self.cells.iter().all(|c| dist_to_polygon_boundary(&c.boundary, p) > self.tol.eps_geom)
    }
}

fn clip_edges(b: &Rect) -> Vec<InputSegment> {
    let c = b.corners();
    (0..4)
        .map(|i| InputSegment { a: c[i], b: c[(i + 1) % 4], source: EdgeSource::Clip, mark_endpoints: false })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_box() -> Rect {
        Rect::new(Point::new(-5.0, -5.0), Point::new(5.0, 5.0))
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn two_crossing_lines() {
        let arr = Arrangement::from_lines(&[Line::vertical(0.0), Line::slope_intercept(0.0, 0.0)], unit_box(), tol()).unwrap();
        assert_eq!(arr.interior_vertices().len(), 1);
        assert_eq!(arr.cells.len(), 4);
        assert_eq!(arr.euler_characteristic(), 2);
        let id = arr.locate(Point::new(1.0, 1.0)).unwrap();
        let c = arr.cell(id);
        assert!(c.boundary.iter().all(|p| p.x >= -1e-12 && p.y >= -1e-12));
        assert!(matches!(arr.locate(Point::new(0.0, 1.0)), Err(Error::OnBoundary)));
    }

    #[test]
    fn three_lines_seven_cells() {
        let lines = [
            Line::slope_intercept(0.0, 0.0),
            Line::slope_intercept(1.0, 1.0),
            Line::slope_intercept(-1.0, 1.5),
        ];
        let arr = Arrangement::from_lines(&lines, unit_box(), tol()).unwrap();
        assert_eq!(arr.interior_vertices().len(), 3);
        assert_eq!(arr.cells.len(), 7);
        assert!(arr.cells.iter().all(|c| c.convex));
        let tri: Vec<&Cell> = arr.cells.iter().filter(|c| c.boundary.iter().all(|p| p.max_abs() < 4.0)).collect();
        assert_eq!(tri.len(), 1);
        let centroid = tri[0].boundary.iter().fold(Point::origin(), |a, &p| a + p) * (1.0 / 3.0);
        assert_eq!(arr.locate(centroid).unwrap(), tri[0].id);
    }

    fn random_lines(n: usize, seed: u64) -> Vec<Line> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let p = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Line::through(p, p + Point::new(a.cos(), a.sin())).unwrap()
            })
            .collect()
    }

    #[test]
    fn random_lines_counts() {
        let lines = random_lines(10, 3);
        let arr = Arrangement::from_lines(&lines, unit_box(), tol()).unwrap();
        let mut brute = 0;
        for i in 0..10 {
            for j in 0..i {
                if let Ok(LineIntersection::Point(_)) = intersect_lines(&lines[i], &lines[j], &tol()) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 45);
        assert_eq!(arr.interior_vertices().len(), brute);
        assert_eq!(arr.cells.len(), (10 * 10 + 10 + 2) / 2);
        assert_eq!(arr.euler_characteristic(), 2);
        let total: f64 = arr.cells.iter().map(|c| c.area()).sum();
        assert!((total - arr.clip_box.width() * arr.clip_box.height()).abs() < 1e-6 * total);
    }

    #[test]
    fn locate_matches_sign_vectors() {
        let lines = random_lines(8, 11);
        let arr = Arrangement::from_lines(&lines, unit_box(), tol()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let Ok(id) = arr.locate(p) else { continue };
            // any interior point of the returned cell lies on the same side of every line
            let c = arr.cell(id);
            let inner = c.boundary.iter().fold(Point::origin(), |a, &q| a + q) * (1.0 / c.boundary.len() as f64);
            for l in &lines {
                assert_eq!(l.signed_dist(p) > 0.0, l.signed_dist(inner) > 0.0);
            }
        }
    }

    #[test]
    fn duplicate_lines_are_perturbed() {
        let l = Line::slope_intercept(0.5, 0.0);
        let arr = Arrangement::from_lines(&[l, l, Line::vertical(0.3)], unit_box(), tol()).unwrap();
        assert!(arr.perturbed);
        assert_eq!(arr.cells.len(), 6);
    }

    #[test]
    fn concurrent_lines_are_perturbed() {
        let lines = [Line::slope_intercept(1.0, 0.0), Line::slope_intercept(-1.0, 0.0), Line::vertical(0.0)];
        let arr = Arrangement::from_lines(&lines, unit_box(), tol()).unwrap();
        assert!(arr.perturbed);
        assert_eq!(arr.interior_vertices().len(), 3);
    }

    #[test]
    fn crossing_segments() {
        let s = [
            Segment::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0)).unwrap(),
            Segment::new(Point::new(-1.0, 1.0), Point::new(1.0, -1.0)).unwrap(),
        ];
        let arr = Arrangement::from_segments(&s, unit_box(), tol()).unwrap();
        assert_eq!(arr.interior_vertices().len(), 5);
        assert_eq!(arr.cells.len(), 1);
        assert_eq!(arr.cells[0].holes.len(), 1);
        assert!(!arr.cells[0].convex);
        assert_eq!(arr.components(), 2);
        assert_eq!(arr.euler_characteristic(), 3);
    }

    #[test]
    fn square_of_segments() {
        let c = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let s: Vec<Segment> = (0..4).map(|i| Segment::new(c[i], c[(i + 1) % 4]).unwrap()).collect();
        let arr = Arrangement::from_segments(&s, unit_box(), tol()).unwrap();
        let bounded: Vec<&Cell> = arr.cells.iter().filter(|c| c.holes.is_empty()).collect();
        assert_eq!(bounded.len(), 1);
        assert!(bounded[0].convex);
        assert!((bounded[0].area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_segment_vertex_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let segs: Vec<Segment> = (0..100)
            .map(|_| {
                let p = Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
                let q = p + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                Segment::new(p, q).unwrap()
            })
            .collect();
        let mut crossings = 0;
        for i in 0..segs.len() {
            for j in 0..i {
                if crate::geom::segment_intersection(&segs[i], &segs[j], 0.0).is_some() {
                    crossings += 1;
                }
            }
        }
        let arr = Arrangement::from_segments(&segs, unit_box(), tol()).unwrap();
        assert_eq!(arr.interior_vertices().len(), 200 + crossings);
        let holes: usize = arr.cells.iter().map(|c| c.holes.len()).sum();
        assert_eq!(arr.euler_characteristic(), 1 + arr.components() as i64, "V{} E{} F{} C{} holes{} outer{}", arr.vertex_count(), arr.edge_count(), arr.face_count(), arr.components(), holes, arr.dcel.faces[0].holes.len());
        let total: f64 = arr.cells.iter().map(|c| c.area()).sum();
        let want = arr.clip_box.width() * arr.clip_box.height();
        assert!((total - want).abs() < 1e-6 * want);
    }
}
