//! Square placements. Work in the space of boundary points `q = τ(p)`: the
//! boundary piece through `q` has length `fwd(q) + bwd(q)`, where `fwd` and
//! `bwd` are the walking distances from `q` along the square boundary to the
//! first primitive in each direction. Cutting a convex region at every line
//! where the first hit can change leaves pieces on which both are affine, so
//! each level set `fwd + bwd = ε` is a segment.

use super::chain::{chain_pieces, is_convex_chain, merge_collinear};
use super::{translation_vectors, CriticalCurve, CurvePiece, DegenerateRegion, Epsilon, TranslationVector};
use crate::arrangement::{convex_decompose, Arrangement, BoundaryEdge, EdgeSource};
use crate::error::{Error, Result};
use crate::perimeter::{ShapeKind, SQUARE_SIDE_DIRS};
use crate::{Line, Point};

/// `f(a) = x_a + y_a`: the distances from `a` to the nearest line along the
/// two sides leaving square corner `corner`. Corner 2 (upper right) walks
/// left and down.
pub fn f_value(a: Point, lines: &[Line], corner: usize) -> Result<f64> {
    let k = corner % 4;
    let dirs = [SQUARE_SIDE_DIRS[k], -SQUARE_SIDE_DIRS[(k + 3) % 4]];
    let mut total = 0.0;
    for d in dirs {
        let best = lines
            .iter()
            .filter_map(|l| {
                let nd = l.normal().dot(d);
                if nd.abs() < 1e-15 {
                    return None;
                }
                let t = -l.signed_dist(a) / nd;
                (t > 0.0).then_some(t)
            })
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Err(Error::Unbounded);
        }
        total += best;
    }
    Ok(total)
}

/// One walking direction: a first leg along `d1` of length `tc`, then a turn
/// onto `d2`.
#[derive(Debug, Clone, Copy)]
struct Walk {
    d1: Point,
    tc: f64,
    d2: Point,
}

fn walks(s: f64) -> (Walk, Walk) {
    let s = s.rem_euclid(4.0);
    let k = (s.floor() as usize).min(3);
    let mut frac = s - k as f64;
    if frac < 1e-12 {
        frac = 0.0;
    }
    let d = |i: usize| SQUARE_SIDE_DIRS[i % 4];
    let fwd = Walk { d1: d(k), tc: 1.0 - frac, d2: d(k + 1) };
    let bwd = if frac > 0.0 {
        Walk { d1: -d(k), tc: frac, d2: -d(k + 3) }
    } else {
        Walk { d1: -d(k + 3), tc: 1.0, d2: -d(k + 2) }
    };
    (fwd, bwd)
}

/// `g·q + k`.
#[derive(Debug, Clone, Copy)]
struct Affine {
    g: Point,
    k: f64,
}

impl Affine {
    fn eval(&self, q: Point) -> f64 {
        self.g.dot(q) + self.k
    }
}

fn first_hit(edges: &[BoundaryEdge], o: Point, d: Point) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, e) in edges.iter().enumerate() {
        let s = e.b - e.a;
        let denom = d.cross(s);
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = e.a - o;
        let t = w.cross(s) / denom;
        let u = w.cross(d) / denom;
        if t > 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&u) && best.is_none_or(|(b, _)| t < b) {
            best = Some((t, i));
        }
    }
    best
}

/// Walking distance as an affine function of `q`, valid on the piece that
/// contains the probe point. `None` when the walk leaves the clip box.
///
/// A first leg at least `ε` long is followed without a turn: past its end the
/// walk already exceeds `ε`, so the extrapolated value is just as useful.
fn walk_affine(edges: &[BoundaryEdge], probe: Point, w: &Walk, eps: f64) -> Option<Affine> {
    let hit = |o: Point, d: Point| first_hit(edges, o, d).filter(|&(_, e)| edges[e].source != EdgeSource::Clip);
    let affine = |e: usize, off: Point, d: Point, base: f64| {
        let ed = &edges[e];
        let n = (ed.b - ed.a).perp();
        let c = n.dot(ed.a);
        let nd = n.dot(d);
        Affine { g: n * (-1.0 / nd), k: base + (c - n.dot(off)) / nd }
    };
    match first_hit(edges, probe, w.d1) {
        Some((t, e)) if t < w.tc || w.tc >= eps => {
            if edges[e].source == EdgeSource::Clip {
                None
            } else {
                Some(affine(e, Point::origin(), w.d1, 0.0))
            }
        }
        _ if w.tc >= eps => None,
        _ => {
            let off = w.d1 * w.tc;
            hit(probe + off, w.d2).map(|(_, e)| affine(e, off, w.d2, w.tc))
        }
    }
}

/// `n·x = c`.
type CutLine = (Point, f64);

fn split(poly: &[Point], (n, c): CutLine, tol: f64) -> Option<(Vec<Point>, Vec<Point>)> {
    let vals: Vec<f64> = poly.iter().map(|p| n.dot(*p) - c).collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo >= -tol || hi <= tol {
        return None;
    }
    let (mut neg, mut pos) = (Vec::new(), Vec::new());
    let m = poly.len();
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (vp, vq) = (vals[i], vals[(i + 1) % m]);
        if vp <= 0.0 {
            neg.push(p);
        }
        if vp >= 0.0 {
            pos.push(p);
        }
        if (vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0) {
            let x = p.lerp(q, vp / (vp - vq));
            neg.push(x);
            pos.push(x);
        }
    }
    (neg.len() >= 3 && pos.len() >= 3).then_some((neg, pos))
}

fn cut_lines(poly: &[Point], edges: &[BoundaryEdge], verts: &[Point], w: [&Walk; 2], eps: f64, tol: f64) -> Vec<CutLine> {
    let mut lines: Vec<CutLine> = Vec::new();
    for v in verts {
        lines.push((Point::new(1.0, 0.0), v.x));
        lines.push((Point::new(0.0, 1.0), v.y));
    }
    for walk in w {
        if walk.tc >= eps {
            continue;
        }
        let shift = walk.d1 * walk.tc;
        let n2 = walk.d2.perp();
        for v in verts {
            lines.push((n2, n2.dot(*v - shift)));
        }
        for e in edges.iter().filter(|e| e.source != EdgeSource::Clip) {
            let d = e.b - e.a;
            let len = d.norm();
            if len == 0.0 {
                continue;
            }
            let n = d.perp() * (1.0 / len);
            lines.push((n, n.dot(e.a - shift)));
        }
    }
    // only lines through the polygon's interior matter
    lines.retain(|&(n, c)| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in poly {
            let v = n.dot(*p) - c;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        lo < -tol && hi > tol
    });
    lines.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)).then(a.1.total_cmp(&b.1)));
    lines.dedup_by(|a, b| a.0.dist(b.0) < 1e-12 && (a.1 - b.1).abs() <= tol);
    lines
}

/// Level-set segments `fwd + bwd = ε` over one convex region, in q-space,
/// keeping only the part where the previous vector is outside the ε-piece
/// (`bwd ≤ gap`) so every ε-segment is counted for one vector only.
fn region_segments(
    poly: &[Point],
    edges: &[BoundaryEdge],
    verts: &[Point],
    tv: &TranslationVector,
    gap: f64,
    eps: f64,
    tol: f64,
) -> (Vec<(Point, Point)>, Vec<Vec<Point>>) {
    let (fwd, bwd) = walks(tv.s);
    let lines = cut_lines(poly, edges, verts, [&fwd, &bwd], eps, tol);
    let mut pieces = vec![poly.to_vec()];
    for l in lines {
        let mut next = Vec::with_capacity(pieces.len() + 4);
        for p in pieces {
            match split(&p, l, tol) {
                Some((a, b)) => {
                    next.push(a);
                    next.push(b);
                }
                None => next.push(p),
            }
        }
        pieces = next;
    }

    let mut segs = Vec::new();
    let mut flat = Vec::new();
    for piece in pieces {
        let probe = piece.iter().fold(Point::origin(), |a, &p| a + p) * (1.0 / piece.len() as f64);
        let (Some(f), Some(b)) = (walk_affine(edges, probe, &fwd, eps), walk_affine(edges, probe, &bwd, eps)) else { continue };
        let g = f.g + b.g;
        let k = f.k + b.k;
        let gn = g.norm();
        if gn < 1e-12 {
            if (k - eps).abs() <= 1e-9 {
                flat.push(piece);
            }
            continue;
        }
        let o = g * ((eps - k) / (gn * gn));
        let dir = g.perp() * (1.0 / gn);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut clip = |a0: f64, a1: f64| {
            // keep a0 + a1·t ≥ 0
            if a1.abs() < 1e-12 {
                if a0 < -tol {
                    lo = f64::INFINITY;
                }
            } else if a1 > 0.0 {
                lo = lo.max(-a0 / a1);
            } else {
                hi = hi.min(-a0 / a1);
            }
        };
        let m = piece.len();
        for i in 0..m {
            let (a, c) = (piece[i], piece[(i + 1) % m]);
            let len = a.dist(c);
            if len <= tol {
                continue;
            }
            let e = (c - a) * (1.0 / len);
            clip(e.cross(o - a), e.cross(dir));
        }
        let bn = b.g.norm().max(1.0);
        clip((gap - b.eval(o)) / bn, -b.g.dot(dir) / bn);
        if !(lo.is_finite() && hi.is_finite()) || hi - lo <= 1e-12 {
            continue;
        }
        let (a, c) = (o + dir * lo, o + dir * hi);
        // slivers thinner than the tolerance can leave the range unbounded
        let mut bb = crate::Rect::empty();
        piece.iter().for_each(|&p| bb.include(p));
        let bb = bb.expand(10.0 * tol);
        if bb.contains(a) && bb.contains(c) {
            segs.push((a, c));
        }
    }
    (segs, flat)
}

/// Critical curves S(c, τ) of a square over any cell; nonconvex cells are
/// split into convex subcells first.
pub fn square_cell_curves(arr: &Arrangement, cell: usize, tv: &TranslationVector, spacing: f64, eps: f64) -> (Vec<CriticalCurve>, Vec<DegenerateRegion>) {
    let c = &arr.cells[cell];
    let scale = arr.clip_box.max.max_abs().max(arr.clip_box.min.max_abs()).max(1.0);
    let tol = arr.tol.eps_geom * scale;
    let regions: Vec<Vec<Point>> = if c.convex {
        vec![c.boundary.clone()]
    } else {
        convex_decompose(c, arr).into_iter().map(|s| s.polygon).collect()
    };
    let verts = c.vertices();
    let tau = tv.offset();
    let mut pieces = Vec::new();
    let mut degenerate = Vec::new();
    for r in &regions {
        let (segs, flat) = region_segments(r, &c.edges, &verts, tv, spacing, eps, tol);
        pieces.extend(segs.into_iter().map(|(a, b)| CurvePiece::Segment { a: a - tau, b: b - tau }));
        degenerate.extend(flat.into_iter().map(|poly| DegenerateRegion {
            cell,
            vector: tv.index,
            polygon: poly.into_iter().map(|p| p - tau).collect(),
        }));
    }
    let curves = chain_pieces(&pieces, 10.0 * tol)
        .into_iter()
        .map(merge_collinear)
        .map(|ch| CriticalCurve { cell, vector: *tv, convex: is_convex_chain(&ch), pieces: ch })
        .collect();
    (curves, degenerate)
}

fn single_vector(arr: &Arrangement, cell: usize, tv: &TranslationVector, eps: Epsilon) -> Result<(Vec<CriticalCurve>, Vec<DegenerateRegion>)> {
    if !arr.cells[cell].convex {
        return Err(Error::Unsupported("cell is not convex".into()));
    }
    let set = translation_vectors(ShapeKind::Square, eps);
    Ok(square_cell_curves(arr, cell, tv, set.spacing, eps.value()))
}

/// Level set of `f` in a convex cell for a corner vector.
pub fn corner_curve(arr: &Arrangement, cell: usize, tv: &TranslationVector, eps: Epsilon) -> Result<Vec<CriticalCurve>> {
    if !tv.is_corner() {
        return Err(Error::InvalidParameter("corner_curve needs a corner vector".into()));
    }
    Ok(single_vector(arr, cell, tv, eps)?.0)
}

/// Axis-parallel placement segments for a side vector in a convex cell.
/// Cells exactly ε wide come back as degenerate regions instead of curves.
pub fn edge_curve(arr: &Arrangement, cell: usize, tv: &TranslationVector, eps: Epsilon) -> Result<(Vec<CriticalCurve>, Vec<DegenerateRegion>)> {
    if tv.is_corner() || !matches!(tv.kind, super::VectorKind::Edge { .. }) {
        return Err(Error::InvalidParameter("edge_curve needs a side vector".into()));
    }
    single_vector(arr, cell, tv, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ToleranceConfig;
    use crate::placement::VectorKind;
    use crate::Rect;

    fn bx() -> Rect {
        Rect::new(Point::new(-4.0, -4.0), Point::new(4.0, 4.0))
    }

    fn corner(k: usize) -> TranslationVector {
        let o = crate::perimeter::SQUARE_CORNERS[k];
        TranslationVector { index: 0, dx: o.x, dy: o.y, s: k as f64, kind: VectorKind::Corner { corner: k } }
    }

    fn eps(e: f64) -> Epsilon {
        Epsilon::new(ShapeKind::Square, e).unwrap()
    }

    #[test]
    fn f_examples() {
        let lines = [Line::vertical(0.0), Line::slope_intercept(0.0, 0.0)];
        assert!((f_value(Point::new(0.1, 0.2), &lines, 2).unwrap() - 0.3).abs() < 1e-12);
        for t in [0.01, 0.1, 0.2] {
            assert!((f_value(Point::new(t, 0.25 - t), &lines, 2).unwrap() - 0.25).abs() < 1e-12);
        }
        assert!(matches!(f_value(Point::new(0.1, 0.2), &lines[..1], 2), Err(Error::Unbounded)));
    }

    #[test]
    fn quadrant_corner_curve() {
        let lines = [Line::vertical(0.0), Line::slope_intercept(0.0, 0.0)];
        let arr = Arrangement::from_lines(&lines, bx(), ToleranceConfig::default()).unwrap();
        let cell = arr.locate(Point::new(1.0, 1.0)).unwrap();
        let curves = corner_curve(&arr, cell, &corner(2), eps(0.25)).unwrap();
        assert_eq!(curves.len(), 1);
        let c = &curves[0];
        assert_eq!(c.pieces.len(), 1);
        let (a, b) = (c.start(), c.end());
        let want = [Point::new(-0.25, -0.5), Point::new(-0.5, -0.25)];
        assert!(
            (a.dist(want[0]) < 1e-12 && b.dist(want[1]) < 1e-12) || (a.dist(want[1]) < 1e-12 && b.dist(want[0]) < 1e-12),
            "{a:?} {b:?}"
        );
        // the other quadrants give nothing near the vertex for this corner
        for q in [Point::new(-1.0, 1.0), Point::new(-1.0, -1.0), Point::new(1.0, -1.0)] {
            let cell = arr.locate(q).unwrap();
            let curves = corner_curve(&arr, cell, &corner(2), eps(0.25)).unwrap();
            assert!(curves.iter().all(|c| c.pieces.iter().all(|p| p.start().dist(Point::origin()) > 0.5)));
        }
    }

    #[test]
    fn tiny_cell_has_no_curve() {
        // triangle with legs 0.1: every walk is shorter than ε
        let lines = [Line::vertical(0.0), Line::slope_intercept(0.0, 0.0), Line::through(Point::new(0.1, 0.0), Point::new(0.0, 0.1)).unwrap()];
        let arr = Arrangement::from_lines(&lines, bx(), ToleranceConfig::default()).unwrap();
        let cell = arr.locate(Point::new(0.02, 0.02)).unwrap();
        for k in 0..4 {
            assert!(corner_curve(&arr, cell, &corner(k), eps(0.25)).unwrap().is_empty());
        }
    }

    #[test]
    fn slanted_strip_edge_curve() {
        // x = 0 and x = 0.2 + y/4; top-edge midpoint
        let d = 0.2;
        let lines = [Line::vertical(0.0), Line::through(Point::new(d, 0.0), Point::new(d + 0.25, 1.0)).unwrap()];
        let arr = Arrangement::from_lines(&lines, bx(), ToleranceConfig::default()).unwrap();
        let cell = arr.locate(Point::new(0.1, 0.0)).unwrap();
        let tv = TranslationVector { index: 10, dx: 0.0, dy: 0.5, s: 2.5, kind: VectorKind::Edge { side: 2 } };
        let (curves, flat) = edge_curve(&arr, cell, &tv, eps(0.25)).unwrap();
        assert!(flat.is_empty());
        assert_eq!(curves.len(), 1);
        for p in [curves[0].start(), curves[0].end()] {
            assert!((p.y + 0.3).abs() < 1e-12, "{p:?}");
            assert!(p.x > -1e-12 && p.x < 0.25 + 1e-12);
        }
        assert!(curves[0].pieces.iter().map(|p| p.length()).sum::<f64>() <= 0.25 + 1e-12);
    }

    #[test]
    fn strip_wider_than_eps_is_empty_and_exact_width_is_flagged() {
        let tv = TranslationVector { index: 10, dx: 0.0, dy: 0.5, s: 2.5, kind: VectorKind::Edge { side: 2 } };
        for (w, flagged) in [(0.3, false), (0.25, true)] {
            let lines = [Line::vertical(0.0), Line::vertical(w)];
            let arr = Arrangement::from_lines(&lines, bx(), ToleranceConfig::default()).unwrap();
            let cell = arr.locate(Point::new(0.1, 0.0)).unwrap();
            let (curves, flat) = edge_curve(&arr, cell, &tv, eps(0.25)).unwrap();
            assert!(curves.is_empty(), "width {w}");
            assert_eq!(!flat.is_empty(), flagged, "width {w}");
        }
    }

    #[test]
    fn acute_triangle_gives_two_curves() {
        // f is small near the apex and near the far side, larger in between
        let lines = [
            Line::through(Point::new(0.0, 0.0), Point::new(1.0, 0.3)).unwrap(),
            Line::through(Point::new(0.0, 0.0), Point::new(0.3, 1.0)).unwrap(),
            Line::through(Point::new(3.0, 0.0), Point::new(0.0, 3.0)).unwrap(),
        ];
        let arr = Arrangement::from_lines(&lines, bx(), ToleranceConfig::default()).unwrap();
        let cell = arr.locate(Point::new(1.0, 1.0)).unwrap();
        let curves = corner_curve(&arr, cell, &corner(0), eps(0.25)).unwrap();
        assert_eq!(curves.len(), 2, "{curves:?}");
        assert!(curves.iter().all(|c| c.convex));
    }
}
