//! Overlay of curve pieces: intersection points, and vertex, edge and face
//! counts of the induced planar graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CriticalCurve, CurvePiece, EllipticArc};
use crate::{Point, Rect, Segment};

const END_TOL: f64 = 1e-9;

/// One contact between pieces `i` and `j` at fractions `ui`, `uj`.
#[derive(Debug, Clone, Copy)]
struct Hit {
    i: usize,
    j: usize,
    ui: f64,
    uj: f64,
    p: Point,
}

impl Hit {
    fn at_both_ends(&self) -> bool {
        let end = |u: f64| u <= END_TOL || u >= 1.0 - END_TOL;
        end(self.ui) && end(self.uj)
    }
}

fn seg_seg(a: Point, b: Point, c: Point, d: Point, tol: f64) -> (Vec<(f64, f64, Point)>, bool) {
    let (r, s) = (b - a, d - c);
    let den = r.cross(s);
    let (lr, ls) = (r.norm(), s.norm());
    if den.abs() <= 1e-12 * lr * ls {
        // parallel: only collinear overlaps matter
        if (c - a).cross(r).abs() / lr > tol {
            return (Vec::new(), false);
        }
        let proj = |p: Point| (p - a).dot(r) / (lr * lr);
        let projo = |p: Point| (p - c).dot(s) / (ls * ls);
        let mut out = Vec::new();
        for (u, p) in [(proj(c), c), (proj(d), d)] {
            if (-END_TOL..=1.0 + END_TOL).contains(&u) {
                out.push((u.clamp(0.0, 1.0), projo(p).clamp(0.0, 1.0), p));
            }
        }
        for (v, p) in [(projo(a), a), (projo(b), b)] {
            if (-END_TOL..=1.0 + END_TOL).contains(&v) {
                out.push((proj(p).clamp(0.0, 1.0), v.clamp(0.0, 1.0), p));
            }
        }
        let (lo, hi) = (proj(c).min(proj(d)).max(0.0), proj(c).max(proj(d)).min(1.0));
        let shared = (hi - lo) * lr > tol;
        return (out, shared);
    }
    let w = c - a;
    let t = w.cross(s) / den;
    let u = w.cross(r) / den;
    let et = tol / lr;
    let eu = tol / ls;
    if t >= -et && t <= 1.0 + et && u >= -eu && u <= 1.0 + eu {
        let (t, u) = (t.clamp(0.0, 1.0), u.clamp(0.0, 1.0));
        (vec![(t, u, a.lerp(b, t))], false)
    } else {
        (Vec::new(), false)
    }
}

/// Fraction along the arc for ellipse parameter `t`, if it lies on the arc.
fn arc_fraction(e: &EllipticArc, t: f64) -> Option<f64> {
    let (lo, hi) = (e.t0.min(e.t1), e.t0.max(e.t1));
    let tt = lo + (t - lo).rem_euclid(std::f64::consts::TAU);
    let span = hi - lo;
    let slack = 1e-12;
    let tt = if tt > hi + slack && tt - std::f64::consts::TAU >= lo - slack { tt - std::f64::consts::TAU } else { tt };
    if tt < lo - slack || tt > hi + slack || span <= 0.0 {
        return None;
    }
    Some(((tt - e.t0) / (e.t1 - e.t0)).clamp(0.0, 1.0))
}

fn seg_arc(a: Point, b: Point, e: &EllipticArc, tol: f64) -> Vec<(f64, f64, Point)> {
    let d = b - a;
    let len = d.norm();
    let n = d.perp() * (1.0 / len);
    let (sr, cr) = e.rot.sin_cos();
    let e1 = Point::new(cr, sr);
    let e2 = Point::new(-sr, cr);
    let ca = e.ax * n.dot(e1);
    let cb = e.ay * n.dot(e2);
    let rho = ca.hypot(cb);
    let rhs = n.dot(a) - n.dot(e.center);
    if rho < 1e-300 || rhs.abs() > rho * (1.0 + 1e-12) {
        return Vec::new();
    }
    let phi = cb.atan2(ca);
    let ac = (rhs / rho).clamp(-1.0, 1.0).acos();
    let mut out: Vec<(f64, f64, Point)> = Vec::new();
    for t in [phi + ac, phi - ac] {
        let Some(ua) = arc_fraction(e, t) else { continue };
        let p = e.at(ua);
        let us = (p - a).dot(d) / (len * len);
        if us >= -tol / len && us <= 1.0 + tol / len && !out.iter().any(|o| o.2.dist(p) <= tol) {
            out.push((us.clamp(0.0, 1.0), ua, p));
        }
    }
    out
}

fn arc_arc(e: &EllipticArc, f: &EllipticArc, tol: f64) -> Vec<(f64, f64, Point)> {
    const N: usize = 16;
    let pe: Vec<Point> = (0..=N).map(|k| e.at(k as f64 / N as f64)).collect();
    let pf: Vec<Point> = (0..=N).map(|k| f.at(k as f64 / N as f64)).collect();
    let h = 1.0 / N as f64;
    let mut out: Vec<(f64, f64, Point)> = Vec::new();
    for a in 0..N {
        for b in 0..N {
            let (p, q, r, s) = (pe[a], pe[a + 1], pf[b], pf[b + 1]);
            let dr = q - p;
            let ds = s - r;
            let den = dr.cross(ds);
            if den.abs() < 1e-300 {
                continue;
            }
            let w = r - p;
            let t = w.cross(ds) / den;
            let u = w.cross(dr) / den;
            if !(-0.5..=1.5).contains(&t) || !(-0.5..=1.5).contains(&u) {
                continue;
            }
            // Newton on e(x) = f(y)
            let (mut x, mut y) = ((a as f64 + t) * h, (b as f64 + u) * h);
            let mut ok = false;
            for _ in 0..40 {
                let fx = e.at(x) - f.at(y);
                if fx.norm() < 1e-14 {
                    ok = true;
                    break;
                }
                let j1 = e.derivative(e.t0 + (e.t1 - e.t0) * x);
                let j2 = f.derivative(f.t0 + (f.t1 - f.t0) * y) * -1.0;
                let det = j1.cross(j2);
                if det.abs() < 1e-300 {
                    break;
                }
                // solve [j1 j2]·(dx, dy) = −fx
                let dx = -(fx.cross(j2)) / det;
                let dy = -(j1.cross(fx)) / det;
                x += dx;
                y += dy;
            }
            if !ok {
                let fx = e.at(x) - f.at(y);
                ok = fx.norm() <= tol;
            }
            let inside = |v: f64| (-1e-9..=1.0 + 1e-9).contains(&v);
            if ok && inside(x) && inside(y) {
                let p = e.at(x.clamp(0.0, 1.0));
                if !out.iter().any(|o| o.2.dist(p) <= 1e-9) {
                    out.push((x.clamp(0.0, 1.0), y.clamp(0.0, 1.0), p));
                }
            }
        }
    }
    out
}

/// All contacts between two pieces, plus whether they overlap along a stretch.
fn intersect(p: &CurvePiece, q: &CurvePiece, tol: f64) -> (Vec<(f64, f64, Point)>, bool) {
    match (p, q) {
        (CurvePiece::Segment { a, b }, CurvePiece::Segment { a: c, b: d }) => seg_seg(*a, *b, *c, *d, tol),
        (CurvePiece::Segment { a, b }, CurvePiece::Arc(e)) => (seg_arc(*a, *b, e, tol), false),
        (CurvePiece::Arc(e), CurvePiece::Segment { a, b }) => {
            (seg_arc(*a, *b, e, tol).into_iter().map(|(u, v, p)| (v, u, p)).collect(), false)
        }
        (CurvePiece::Arc(e), CurvePiece::Arc(f)) => (arc_arc(e, f, tol), false),
    }
}

/// Broad phase over a uniform grid, then exact tests; `keep` filters pairs.
fn all_hits(pieces: &[CurvePiece], keep: impl Fn(usize, usize) -> bool + Sync, tol: f64) -> (Vec<Hit>, usize) {
    let boxes: Vec<Rect> = pieces.iter().map(|p| p.bbox().expand(tol)).collect();
    if pieces.is_empty() {
        return (Vec::new(), 0);
    }
    let mean = boxes.iter().map(|b| b.width().max(b.height())).sum::<f64>() / boxes.len() as f64;
    let cell = mean.max(1e-6) * 2.0;
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        let (x0, y0) = key(b.min.x, b.min.y);
        let (x1, y1) = key(b.max.x, b.max.y);
        for gx in x0..=x1 {
            for gy in y0..=y1 {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    let mut pairs = Vec::new();
    for (&g, ids) in &grid {
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if !boxes[i].intersects(&boxes[j]) || !keep(i, j) {
                    continue;
                }
                // count each pair only in the bucket holding its overlap corner
                if key(boxes[i].min.x.max(boxes[j].min.x), boxes[i].min.y.max(boxes[j].min.y)) != g {
                    continue;
                }
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    let results: Vec<(Vec<Hit>, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (pts, shared) = intersect(&pieces[i], &pieces[j], tol);
            (pts.into_iter().map(|(ui, uj, p)| Hit { i, j, ui, uj, p }).collect(), shared)
        })
        .collect();
    let mut shared = 0;
    let mut hits = Vec::new();
    for (h, s) in results {
        hits.extend(h);
        shared += s as usize;
    }
    (hits, shared)
}

/// Transversal intersections between two curve families.
#[derive(Debug, Clone, Default)]
pub struct PairIntersections {
    pub points: Vec<Point>,
    /// Piece pairs that overlap along a stretch instead of crossing.
    pub shared_pieces: usize,
}

pub fn pair_intersections(a: &[CriticalCurve], b: &[CriticalCurve]) -> PairIntersections {
    let mut pieces = Vec::new();
    let mut side = Vec::new();
    for (s, fam) in [(0u8, a), (1u8, b)] {
        for c in fam {
            for p in &c.pieces {
                pieces.push(*p);
                side.push(s);
            }
        }
    }
    let tol = 1e-9 * scale_of(&pieces);
    let (hits, shared) = all_hits(&pieces, |i, j| side[i] != side[j], tol);
    let mut points: Vec<Point> = Vec::new();
    for h in hits.iter().filter(|h| !h.at_both_ends()) {
        if !points.iter().any(|q| q.dist(h.p) <= tol) {
            points.push(h.p);
        }
    }
    points.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    PairIntersections { points, shared_pieces: shared }
}

fn scale_of(pieces: &[CurvePiece]) -> f64 {
    pieces.iter().map(|p| p.start().max_abs().max(p.end().max_abs())).fold(1.0, f64::max)
}

/// Size of the overlay graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OverlayCounts {
    pub vertices: usize,
    pub edges: usize,
    /// Faces including the unbounded one, from Euler's formula.
    pub faces: usize,
    pub components: usize,
    /// Crossings between pieces of different vectors.
    pub crossings: usize,
    pub shared_pieces: usize,
    /// Distinct crossing points per unordered vector pair.
    #[serde(skip)]
    pub pair_counts: BTreeMap<(usize, usize), usize>,
}

impl OverlayCounts {
    pub fn max_pair_count(&self) -> usize {
        self.pair_counts.values().copied().max().unwrap_or(0)
    }
}

struct VertexIndex {
    q: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
    pts: Vec<Point>,
}

impl VertexIndex {
    fn id(&mut self, p: Point) -> usize {
        let k = ((p.x / self.q).round() as i64, (p.y / self.q).round() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.map.get(&(k.0 + dx, k.1 + dy)) {
                    for &i in v {
                        if self.pts[i].dist(p) <= self.q {
                            return i;
                        }
                    }
                }
            }
        }
        self.pts.push(p);
        self.map.entry(k).or_default().push(self.pts.len() - 1);
        self.pts.len() - 1
    }
}

pub(crate) fn overlay_counts(curves: &[CriticalCurve], extra: &[Segment], clip: Rect) -> OverlayCounts {
    let mut pieces: Vec<CurvePiece> = Vec::new();
    let mut tag: Vec<Option<usize>> = Vec::new();
    for c in curves {
        for p in &c.pieces {
            pieces.push(*p);
            tag.push(Some(c.vector.index));
        }
    }
    for s in extra {
        pieces.push(CurvePiece::Segment { a: s.p, b: s.q });
        tag.push(None);
    }
    let scale = clip.max.max_abs().max(clip.min.max_abs()).max(1.0);
    let tol = 1e-9 * scale;
    let (mut hits, shared_pieces) = all_hits(&pieces, |_, _| true, tol);
    hits.sort_by(|a, b| (a.i, a.j).cmp(&(b.i, b.j)).then(a.ui.total_cmp(&b.ui)).then(a.uj.total_cmp(&b.uj)));

    let mut vx = VertexIndex { q: tol, map: HashMap::new(), pts: Vec::new() };
    let mut on_piece: Vec<Vec<(f64, usize)>> = pieces.iter().map(|_| Vec::new()).collect();
    for (i, p) in pieces.iter().enumerate() {
        let a = vx.id(p.start());
        let b = vx.id(p.end());
        on_piece[i].push((0.0, a));
        on_piece[i].push((1.0, b));
    }
    let mut pair_sets: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    let mut crossing_set = BTreeSet::new();
    for h in &hits {
        let v = vx.id(h.p);
        on_piece[h.i].push((h.ui, v));
        on_piece[h.j].push((h.uj, v));
        if h.at_both_ends() {
            continue;
        }
        if let (Some(a), Some(b)) = (tag[h.i], tag[h.j]) {
            if a != b {
                pair_sets.entry((a.min(b), a.max(b))).or_default().insert(v);
                crossing_set.insert(v);
            }
        }
    }

    let nv = vx.pts.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edge_keys: BTreeSet<(usize, usize, i64, i64)> = BTreeSet::new();
    for (i, list) in on_piece.iter_mut().enumerate() {
        list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut prev: Option<(f64, usize)> = None;
        for &(u, v) in list.iter() {
            if let Some((pu, pv)) = prev {
                if pv != v {
                    let key = match pieces[i] {
                        CurvePiece::Segment { .. } => (pv.min(v), pv.max(v), 0, 0),
                        CurvePiece::Arc(_) => {
                            let m = pieces[i].at(0.5 * (pu + u));
                            (pv.min(v), pv.max(v), (m.x / (1e3 * tol)).round() as i64, (m.y / (1e3 * tol)).round() as i64)
                        }
                    };
                    if edge_keys.insert(key) {
                        let (a, b) = (find(&mut parent, pv), find(&mut parent, v));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                    prev = Some((u, v));
                }
            } else {
                prev = Some((u, v));
            }
        }
    }
    let components = (0..nv).filter(|&v| find(&mut parent, v) == v).count();
    let edges = edge_keys.len();
    let faces = (edges + 1 + components).saturating_sub(nv);
    OverlayCounts {
        vertices: nv,
        edges,
        faces,
        components,
        crossings: crossing_set.len(),
        shared_pieces,
        pair_counts: pair_sets.into_iter().map(|(k, v)| (k, v.len())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::placement::{TranslationVector, VectorKind};

    fn curve(v: usize, pieces: Vec<CurvePiece>) -> CriticalCurve {
        CriticalCurve {
            cell: 0,
            vector: TranslationVector { index: v, dx: 0.0, dy: 0.0, s: 0.0, kind: VectorKind::Edge { side: 0 } },
            pieces,
            convex: true,
        }
    }

    fn seg(a: (f64, f64), b: (f64, f64)) -> CurvePiece {
        CurvePiece::Segment { a: Point::new(a.0, a.1), b: Point::new(b.0, b.1) }
    }

    #[test]
    fn disjoint_and_crossing_families() {
        let a = vec![curve(0, vec![seg((0.0, 0.0), (1.0, 0.0))])];
        let b = vec![curve(1, vec![seg((0.0, 1.0), (1.0, 1.0))])];
        assert!(pair_intersections(&a, &b).points.is_empty());
        let c = vec![curve(1, vec![seg((0.5, -1.0), (0.5, 1.0))])];
        let r = pair_intersections(&a, &c);
        assert_eq!(r.points.len(), 1);
        assert!(r.points[0].dist(Point::new(0.5, 0.0)) < 1e-12);
        let d = vec![curve(1, vec![seg((0.5, 0.0), (2.0, 0.0))])];
        assert_eq!(pair_intersections(&a, &d).shared_pieces, 1);
    }

    #[test]
    fn grid_counts_match_euler() {
        // 3 horizontal and 3 vertical unit-spaced segments: a 2×2 grid
        let mut cs = Vec::new();
        for k in 0..3 {
            let t = k as f64;
            cs.push(curve(0, vec![seg((0.0, t), (2.0, t))]));
            cs.push(curve(1, vec![seg((t, 0.0), (t, 2.0))]));
        }
        let r = overlay_counts(&cs, &[], Rect::new(Point::new(-1.0, -1.0), Point::new(3.0, 3.0)));
        assert_eq!(r.vertices, 9);
        assert_eq!(r.edges, 12);
        assert_eq!(r.faces, 5);
        assert_eq!(r.components, 1);
        // the four outer corners are end-to-end contacts and do not count
        assert_eq!(r.pair_counts[&(0, 1)], 9 - 4);
    }

    #[test]
    fn arc_intersections_lie_on_both() {
        let e = EllipticArc { center: Point::origin(), ax: 1.0, ay: 0.5, rot: 0.3, t0: -1.0, t1: 2.5 };
        let f = EllipticArc { center: Point::new(0.4, 0.1), ax: 0.8, ay: 0.9, rot: -0.2, t0: 0.0, t1: 6.0 };
        let hits = arc_arc(&e, &f, 1e-9);
        assert!(!hits.is_empty());
        for (u, v, p) in hits {
            assert!(e.at(u).dist(p) < 1e-9 && f.at(v).dist(p) < 1e-9);
        }
        let s = seg_arc(Point::new(-2.0, 0.0), Point::new(2.0, 0.0), &f, 1e-9);
        for (u, v, p) in s {
            assert!(p.y.abs() < 1e-12 && (u - (p.x + 2.0) / 4.0).abs() < 1e-12);
            assert!(f.at(v).dist(p) < 1e-9);
        }
    }
}
