//! Brute-force checks straight from the definitions: the pieces of a shape's
//! boundary left after removing the primitives, and a dense grid scan of
//! placement space for points where some piece has length exactly ε.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Primitives};
use crate::geom::segment_intersection;
use crate::perimeter::{ShapeKind, SQUARE_CORNERS, SQUARE_SIDE_DIRS};
use crate::placement::CriticalCurve;
use crate::{Point, Rect, Segment};

const ZERO: f64 = 1e-12;

/// A place where a primitive crosses the boundary, identified by the
/// primitive and the direction of crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CutId {
    pub primitive: usize,
    /// The primitive's signed distance grows along the boundary here.
    pub rising: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapComponent {
    /// Perimeter coordinate where the piece starts, counterclockwise.
    pub start: f64,
    pub length: f64,
    pub from: Option<CutId>,
    pub to: Option<CutId>,
    pub cell: Option<usize>,
}

impl GapComponent {
    /// Whether perimeter coordinate `s` lies inside this piece.
    pub fn contains(&self, s: f64, perimeter: f64) -> bool {
        let d = (s - self.start).rem_euclid(perimeter);
        d > 0.0 && d < self.length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub placement: Point,
    pub shape: ShapeKind,
    /// Sorted by start coordinate.
    pub components: Vec<GapComponent>,
    /// Primitives touching the boundary without crossing it.
    pub tangencies: usize,
}

impl GapProfile {
    pub fn total_length(&self) -> f64 {
        self.components.iter().map(|c| c.length).sum()
    }

    /// The piece containing perimeter coordinate `s`.
    pub fn component_at(&self, s: f64) -> Option<&GapComponent> {
        let l = self.shape.perimeter();
        self.components.iter().find(|c| c.contains(s, l))
    }
}

struct Cut {
    s: f64,
    id: CutId,
}

fn square_line_cuts(center: Point, n: Point, c: f64, prim: usize, cuts: &mut Vec<Cut>, tangencies: &mut usize) {
    let g: Vec<f64> = SQUARE_CORNERS.iter().map(|&k| n.dot(center + k) - c).collect();
    for k in 0..4 {
        let slope = n.dot(SQUARE_SIDE_DIRS[k]);
        let g0 = g[k];
        if g0.abs() <= ZERO {
            // at the corner: compare the sides before and after
            let before = -n.dot(SQUARE_SIDE_DIRS[(k + 3) % 4]);
            let after = slope;
            if after.abs() <= ZERO {
                // the whole side lies on the line
                *tangencies += 1;
            } else if before.abs() <= ZERO {
                // leaving a side that lies on the line; counted there
            } else if (before > 0.0) == (after > 0.0) {
                *tangencies += 1;
            } else {
                cuts.push(Cut { s: k as f64, id: CutId { primitive: prim, rising: after > 0.0 } });
            }
            continue;
        }
        if slope.abs() <= ZERO {
            continue;
        }
        if g[(k + 1) % 4].abs() <= ZERO {
            continue;
        }
        let t = -g0 / slope;
        if t > 0.0 && t < 1.0 {
            cuts.push(Cut { s: k as f64 + t, id: CutId { primitive: prim, rising: slope > 0.0 } });
        }
    }
}

fn circle_line_cuts(center: Point, n: Point, c: f64, prim: usize, seg: Option<&Segment>, cuts: &mut Vec<Cut>, tangencies: &mut usize) {
    let g = n.dot(center) - c;
    if (g.abs() - 1.0).abs() <= ZERO {
        *tangencies += 1;
        return;
    }
    if g.abs() >= 1.0 {
        return;
    }
    let alpha = n.y.atan2(n.x);
    let a = (-g).acos();
    for (phi, rising) in [(alpha - a, true), (alpha + a, false)] {
        let p = center + Point::new(phi.cos(), phi.sin());
        if let Some(s) = seg {
            let d = s.q - s.p;
            let u = (p - s.p).dot(d) / d.norm_sq();
            if !(0.0..=1.0).contains(&u) {
                continue;
            }
        }
        cuts.push(Cut { s: phi.rem_euclid(std::f64::consts::TAU), id: CutId { primitive: prim, rising } });
    }
}

fn square_segment_cuts(center: Point, seg: &Segment, prim: usize, cuts: &mut Vec<Cut>) {
    let n = (seg.q - seg.p).perp();
    for k in 0..4 {
        let a = center + SQUARE_CORNERS[k];
        let side = Segment { p: a, q: a + SQUARE_SIDE_DIRS[k] };
        if let Some((t, _)) = segment_intersection(&side, seg, 0.0) {
            let slope = n.dot(SQUARE_SIDE_DIRS[k]);
            if t < 1.0 && slope.abs() > ZERO {
                cuts.push(Cut { s: k as f64 + t, id: CutId { primitive: prim, rising: slope > 0.0 } });
            }
        }
    }
}

/// Pieces of the boundary of the shape centered at `center` after removing
/// the primitives.
pub fn boundary_gaps(center: Point, primitives: &Primitives, shape: ShapeKind) -> GapProfile {
    let mut cuts = Vec::new();
    let mut tangencies = 0;
    match primitives {
        Primitives::Lines(lines) => {
            for (i, l) in lines.iter().enumerate() {
                match shape {
                    ShapeKind::Square => square_line_cuts(center, l.normal(), l.c, i, &mut cuts, &mut tangencies),
                    ShapeKind::Circle => circle_line_cuts(center, l.normal(), l.c, i, None, &mut cuts, &mut tangencies),
                }
            }
        }
        Primitives::Segments(segs) => {
            for (i, s) in segs.iter().enumerate() {
                match shape {
                    ShapeKind::Square => square_segment_cuts(center, s, i, &mut cuts),
                    ShapeKind::Circle => {
                        let l = s.supporting_line();
                        circle_line_cuts(center, l.normal(), l.c, i, Some(s), &mut cuts, &mut tangencies)
                    }
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.id.cmp(&b.id)));
    let len = shape.perimeter();
    let components = if cuts.is_empty() {
        vec![GapComponent { start: 0.0, length: len, from: None, to: None, cell: None }]
    } else {
        let m = cuts.len();
        (0..m)
            .map(|i| {
                let (a, b) = (&cuts[i], &cuts[(i + 1) % m]);
                let end = if i + 1 == m { b.s + len } else { b.s };
                GapComponent { start: a.s, length: end - a.s, from: Some(a.id), to: Some(b.id), cell: None }
            })
            .collect()
    };
    GapProfile { placement: center, shape, components, tangencies }
}

/// Like [`boundary_gaps`], with each piece tagged by the arrangement cell
/// holding its midpoint.
pub fn boundary_gaps_in(center: Point, arr: &Arrangement, shape: ShapeKind) -> GapProfile {
    let mut g = boundary_gaps(center, &arr.primitives, shape);
    for c in &mut g.components {
        let mid = center + shape.offset_at(c.start + 0.5 * c.length);
        c.cell = arr.locate(mid).ok();
    }
    g
}

/// Whether some boundary piece has length ε within `tol`; returns those pieces.
pub fn is_epsilon_placement(center: Point, primitives: &Primitives, shape: ShapeKind, eps: f64, tol: f64) -> (bool, Vec<GapComponent>) {
    let g = boundary_gaps(center, primitives, shape);
    let w: Vec<GapComponent> = g.components.into_iter().filter(|c| (c.length - eps).abs() <= tol).collect();
    (!w.is_empty(), w)
}

struct Signature {
    /// Cut positions, sorted by cut.
    cuts: Vec<(CutId, f64)>,
    /// Bounding cuts and length of the piece containing each probe.
    pieces: Vec<(Option<CutId>, Option<CutId>, f64)>,
}

fn signature(center: Point, primitives: &Primitives, shape: ShapeKind, probes: &[f64]) -> Signature {
    let g = boundary_gaps(center, primitives, shape);
    let mut cuts: Vec<(CutId, f64)> = g.components.iter().filter_map(|c| c.from.map(|f| (f, c.start))).collect();
    cuts.sort_by_key(|a| a.0);
    let l = shape.perimeter();
    let pieces = probes
        .iter()
        .map(|&s| {
            let c = g.components.iter().find(|c| (s - c.start).rem_euclid(l) < c.length).unwrap_or(&g.components[0]);
            (c.from, c.to, c.length)
        })
        .collect();
    Signature { cuts, pieces }
}

/// The piece through probe `s` changes continuously between the samples:
/// the same cuts exist and none moves across the probe.
fn consistent(a: &Signature, b: &Signature, s: f64, l: f64) -> bool {
    if a.cuts.len() != b.cuts.len() {
        return false;
    }
    let wrap = |x: f64| {
        let d = (x - s).rem_euclid(l);
        if d > 0.5 * l {
            d - l
        } else {
            d
        }
    };
    a.cuts.iter().zip(&b.cuts).all(|(&(ca, pa), &(cb, pb))| {
        if ca != cb {
            return false;
        }
        let (da, db) = (wrap(pa), wrap(pb));
        // a flip far from the probe is the antipode, not a crossing
        (da <= 0.0) == (db <= 0.0) || (da.abs() > 0.25 * l && db.abs() > 0.25 * l)
    })
}

/// Probe coordinates spaced at most ε apart, so every piece of length ε
/// contains one.
fn probes(shape: ShapeKind, eps: f64) -> Vec<f64> {
    let l = shape.perimeter();
    let m = (l / eps - 1e-9).ceil().max(1.0) as usize;
    (0..m).map(|k| k as f64 * l / m as f64).collect()
}

const REFINE_DEPTH: u32 = 10;

struct ScanCtx<'a> {
    primitives: &'a Primitives,
    shape: ShapeKind,
    eps: f64,
    probes: &'a [f64],
}

impl ScanCtx<'_> {
    fn signature(&self, p: Point) -> Signature {
        signature(p, self.primitives, self.shape, self.probes)
    }

    /// Gap from cut `f` forward to cut `t`, if both exist.
    fn gap(&self, s: &Signature, f: CutId, t: CutId) -> Option<f64> {
        let l = self.shape.perimeter();
        let find = |c: CutId| s.cuts.binary_search_by(|x| x.0.cmp(&c)).ok().map(|i| s.cuts[i].1);
        let d = (find(t)? - find(f)?).rem_euclid(l);
        Some(if d == 0.0 { l } else { d })
    }

    /// Where the gap `f → t` equals ε between the samples, provided these
    /// cuts bound the piece through probe `k` there.
    #[allow(clippy::too_many_arguments)]
    fn root(&self, pa: Point, a: &Signature, pb: Point, b: &Signature, f: CutId, t: CutId, k: usize) -> Option<Point> {
        let ga = self.gap(a, f, t)? - self.eps;
        let gb = self.gap(b, f, t)? - self.eps;
        let root = if ga == 0.0 {
            pa
        } else if gb == 0.0 || ga * gb > 0.0 {
            return None;
        } else {
            // Illinois variant of regula falsi on the segment parameter
            let (mut s0, mut g0, mut s1, mut g1) = (0.0, ga, 1.0, gb);
            let mut side = 0;
            for _ in 0..60 {
                let sm = (s0 * g1 - s1 * g0) / (g1 - g0);
                let gm = self.gap(&self.signature(pa.lerp(pb, sm)), f, t)? - self.eps;
                if gm == 0.0 || (s1 - s0).abs() < 1e-12 {
                    s0 = sm;
                    s1 = sm;
                    break;
                }
                if (gm < 0.0) == (g0 < 0.0) {
                    s0 = sm;
                    g0 = gm;
                    if side == -1 {
                        g1 *= 0.5;
                    }
                    side = -1;
                } else {
                    s1 = sm;
                    g1 = gm;
                    if side == 1 {
                        g0 *= 0.5;
                    }
                    side = 1;
                }
                if gm.abs() < 1e-13 {
                    s0 = sm;
                    s1 = sm;
                    break;
                }
            }
            pa.lerp(pb, 0.5 * (s0 + s1))
        };
        let sr = self.signature(root);
        // the gap jumps between 0 and the perimeter where two cuts swap
        if (self.gap(&sr, f, t)? - self.eps).abs() > 1e-6 {
            return None;
        }
        let z = sr.pieces[k];
        let ok = (z.0 == Some(f) && z.1 == Some(t)) || (z.2 - self.eps).abs() <= 1e-9;
        ok.then_some(root)
    }

    /// Sign changes of `len − ε` between `pa` and `pb` for the given probes.
    #[allow(clippy::too_many_arguments)]
    fn crossing(&self, pa: Point, a: &Signature, pb: Point, b: &Signature, ks: &[usize], depth: u32, out: &mut Vec<Point>) {
        let l = self.shape.perimeter();
        let mut events = Vec::new();
        for &k in ks {
            if consistent(a, b, self.probes[k], l) {
                self.follow(pa, a, pb, b, k, out);
            } else {
                events.push(k);
            }
        }
        if !events.is_empty() && depth > 0 {
            // an event lies between the samples; look on either side of it
            let pm = pa.midpoint(pb);
            let m = self.signature(pm);
            self.crossing(pa, a, pm, &m, &events, depth - 1, out);
            self.crossing(pm, &m, pb, b, &events, depth - 1, out);
        }
    }

    fn follow(&self, pa: Point, a: &Signature, pb: Point, b: &Signature, k: usize, out: &mut Vec<Point>) {
        let (x, y) = (a.pieces[k], b.pieces[k]);
        if x.0.is_none() {
            // no cuts at all: the whole boundary
            if x.2 == self.eps {
                out.push(pa);
            }
            return;
        }
        // The bounding cuts may trade places along the way, so the piece
        // length is a minimum of smooth gaps; follow each gap separately.
        let mut froms = vec![x.0.unwrap(), y.0.unwrap()];
        let mut tos = vec![x.1.unwrap(), y.1.unwrap()];
        froms.dedup();
        tos.dedup();
        for &f in &froms {
            for &t in &tos {
                if let Some(p) = self.root(pa, a, pb, b, f, t, k) {
                    if out.last() != Some(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
}

/// Points where the length of the boundary piece through some probe
/// coordinate crosses ε, interpolated between grid neighbours. Neighbours
/// separated by an event (a cut moving across the probe, appearing or
/// vanishing) are bisected to look on either side of it.
pub fn dense_scan(primitives: &Primitives, shape: ShapeKind, eps: f64, bbox: Rect, resolution: f64) -> Vec<Point> {
    if primitives.is_empty() || bbox.is_empty() {
        return Vec::new();
    }
    let probes = probes(shape, eps);
    let nx = (bbox.width() / resolution).floor() as usize + 1;
    let ny = (bbox.height() / resolution).floor() as usize + 1;
    let at = |i: usize, j: usize| Point::new(bbox.min.x + i as f64 * resolution, bbox.min.y + j as f64 * resolution);
    let row = |j: usize| -> Vec<Signature> { (0..nx).map(|i| signature(at(i, j), primitives, shape, &probes)).collect() };
    let ctx = ScanCtx { primitives, shape, eps, probes: &probes };
    let all: Vec<usize> = (0..probes.len()).collect();
    let crossings = |pa: Point, a: &Signature, pb: Point, b: &Signature, out: &mut Vec<Point>| {
        ctx.crossing(pa, a, pb, b, &all, REFINE_DEPTH, out);
    };
    (0..ny)
        .into_par_iter()
        .map(|j| {
            let cur = row(j);
            let up = if j + 1 < ny { Some(row(j + 1)) } else { None };
            let mut out = Vec::new();
            for i in 0..nx {
                if i + 1 < nx {
                    crossings(at(i, j), &cur[i], at(i + 1, j), &cur[i + 1], &mut out);
                }
                if let Some(up) = &up {
                    crossings(at(i, j), &cur[i], at(i, j + 1), &up[i], &mut out);
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Scan points farther than δ from every curve.
    pub missed_scan_points: Vec<Point>,
    /// Curve samples farther than δ from every scan point.
    pub unsupported_curve_samples: Vec<Point>,
    /// Unsupported clusters of touching curves that are smaller than the
    /// scan resolution both ways. A grid can step over them entirely.
    pub below_resolution: usize,
}

impl VerifyReport {
    pub fn is_empty(&self) -> bool {
        self.missed_scan_points.is_empty() && self.unsupported_curve_samples.is_empty()
    }
}

struct Buckets<T> {
    size: f64,
    map: HashMap<(i64, i64), Vec<T>>,
}

impl<T: Copy> Buckets<T> {
    fn new(size: f64) -> Self {
        Self { size, map: HashMap::new() }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.size).floor() as i64, (p.y / self.size).floor() as i64)
    }

    fn insert_box(&mut self, b: &Rect, v: T) {
        let (x0, y0) = self.key(b.min);
        let (x1, y1) = self.key(b.max);
        for x in x0..=x1 {
            for y in y0..=y1 {
                self.map.entry((x, y)).or_default().push(v);
            }
        }
    }

    fn near(&self, p: Point) -> impl Iterator<Item = &T> {
        let (kx, ky) = self.key(p);
        (-1..=1).flat_map(move |dx| (-1..=1).map(move |dy| (kx + dx, ky + dy))).filter_map(|k| self.map.get(&k)).flatten()
    }
}

/// Mutual coverage of curves and scan points within δ. Curve samples are
/// only checked inside `region` shrunk by δ, where the scan is complete.
pub fn verify(curves: &[CriticalCurve], scan: &[Point], resolution: f64, delta: f64, region: Rect) -> VerifyReport {
    let pieces: Vec<_> = curves.iter().flat_map(|c| c.pieces.iter().copied()).collect();
    let mut pb = Buckets::new(delta);
    for (i, p) in pieces.iter().enumerate() {
        pb.insert_box(&p.bbox().expand(delta * 1e-3), i);
    }
    let missed_scan_points: Vec<Point> = scan
        .par_iter()
        .filter(|&&s| !pb.near(s).any(|&i| pieces[i].dist_to(s) <= delta))
        .copied()
        .collect();

    let mut sb = Buckets::new(delta);
    for &s in scan {
        sb.insert_box(&Rect::new(s, s), s);
    }
    let inner = region.expand(-delta);
    let samples: Vec<(usize, Point)> = curves
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.sample(delta / 4.0).into_iter().map(move |p| (i, p)))
        .filter(|(_, p)| inner.contains(*p))
        .collect();
    let unsupported: Vec<(usize, Point)> =
        samples.par_iter().filter(|&&(_, p)| !sb.near(p).any(|s| s.dist(p) <= delta)).copied().collect();
    let cluster = tiny_clusters(curves, resolution);
    let mut hidden: Vec<usize> = unsupported.iter().filter_map(|&(i, _)| cluster[i]).collect();
    hidden.sort_unstable();
    hidden.dedup();
    let below_resolution = hidden.len();
    let unsupported_curve_samples = unsupported.into_iter().filter(|&(i, _)| cluster[i].is_none()).map(|(_, p)| p).collect();
    VerifyReport { missed_scan_points, unsupported_curve_samples, below_resolution }
}

fn touching(a: &CriticalCurve, b: &CriticalCurve) -> bool {
    let ends = |c: &CriticalCurve| match (c.pieces.first(), c.pieces.last()) {
        (Some(f), Some(l)) => vec![f.at(0.0), l.at(1.0)],
        _ => vec![],
    };
    let meets = |e: Vec<Point>, c: &CriticalCurve| e.iter().any(|&p| c.pieces.iter().any(|q| q.dist_to(p) < 1e-7));
    meets(ends(a), b) || meets(ends(b), a)
}

/// Groups curves that touch. Each curve maps to its group's representative
/// when the group's joint box is narrower than `resolution` both ways.
fn tiny_clusters(curves: &[CriticalCurve], resolution: f64) -> Vec<Option<usize>> {
    let boxes: Vec<Rect> = curves
        .iter()
        .map(|c| c.pieces.iter().fold(Rect::empty(), |r, p| r.union(&p.bbox())).expand(1e-7))
        .collect();
    let n = curves.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let small = |r: &Rect| r.width() < resolution && r.height() < resolution;
    // a group touching any large box is large, so only small boxes need pairing
    for i in (0..n).filter(|&i| small(&boxes[i])) {
        for j in 0..n {
            if j != i && boxes[i].intersects(&boxes[j]) && touching(&curves[i], &curves[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut joint: HashMap<usize, Rect> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = joint.entry(r).or_insert_with(Rect::empty);
        *e = e.union(b);
    }
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            small(&joint[&r]).then_some(r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Line;

    fn lens(g: &GapProfile) -> Vec<f64> {
        let mut v: Vec<f64> = g.components.iter().map(|c| c.length).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn square_examples() {
        let one = Primitives::Lines(vec![Line::vertical(0.0)]);
        let g = boundary_gaps(Point::origin(), &one, ShapeKind::Square);
        assert_eq!(lens(&g), vec![2.0, 2.0]);
        let two = Primitives::Lines(vec![Line::vertical(-0.25), Line::vertical(0.25)]);
        let g = boundary_gaps(Point::origin(), &two, ShapeKind::Square);
        let l = lens(&g);
        let want = [0.5, 0.5, 1.5, 1.5];
        assert!(l.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{l:?}");
        assert!((g.total_length() - 4.0).abs() < 1e-12);
        let (yes, w) = is_epsilon_placement(Point::origin(), &two, ShapeKind::Square, 0.5, 1e-6);
        assert!(yes);
        assert_eq!(w.len(), 2);
        assert!(!is_epsilon_placement(Point::origin(), &two, ShapeKind::Square, 0.3, 1e-6).0);
    }

    #[test]
    fn circle_example() {
        let p = Primitives::Lines(vec![Line::slope_intercept(0.0, 0.0)]);
        let g = boundary_gaps(Point::origin(), &p, ShapeKind::Circle);
        let l = lens(&g);
        assert_eq!(l.len(), 2);
        assert!(l.iter().all(|x| (x - std::f64::consts::PI).abs() < 1e-12));
    }

    #[test]
    fn corner_contact_is_a_tangency() {
        // x + y = 1 touches the square's upper right corner
        let p = Primitives::Lines(vec![Line::through(Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap()]);
        let g = boundary_gaps(Point::origin(), &p, ShapeKind::Square);
        assert_eq!(g.tangencies, 1);
        assert_eq!(g.components.len(), 1);
        // x − y = 0 crosses two corners
        let p = Primitives::Lines(vec![Line::through(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()]);
        let g = boundary_gaps(Point::origin(), &p, ShapeKind::Square);
        assert_eq!(g.tangencies, 0);
        assert_eq!(lens(&g), vec![2.0, 2.0]);
    }

    #[test]
    fn segments_cut_only_where_they_reach() {
        let p = Primitives::Segments(vec![Segment { p: Point::new(0.0, 0.0), q: Point::new(0.0, 2.0) }]);
        let g = boundary_gaps(Point::origin(), &p, ShapeKind::Square);
        assert_eq!(g.components.len(), 1);
        assert!((g.components[0].length - 4.0).abs() < 1e-12);
    }

    #[test]
    fn translation_invariance() {
        let lines = vec![Line::vertical(-0.25), Line::through(Point::new(0.0, 0.1), Point::new(1.0, 0.4)).unwrap()];
        let v = Point::new(3.5, -1.25);
        let moved: Vec<Line> = lines.iter().map(|l| l.translate(v)).collect();
        for k in 0..50 {
            let c = Point::new(-0.4 + 0.016 * k as f64, 0.2 - 0.01 * k as f64);
            let a = lens(&boundary_gaps(c, &Primitives::Lines(lines.clone()), ShapeKind::Square));
            let b = lens(&boundary_gaps(c + v, &Primitives::Lines(moved.clone()), ShapeKind::Square));
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
        }
    }

    #[test]
    fn empty_scan() {
        let r = Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        assert!(dense_scan(&Primitives::Lines(vec![]), ShapeKind::Square, 0.25, r, 0.01).is_empty());
    }
}
