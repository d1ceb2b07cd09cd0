//! Instance generators: the worst-case grid of lines, random inputs in
//! general position, and synthetic trajectory bundles.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Line, Point, Polyline, Rect, Result, Segment};

pub const DEFAULT_TILT: f64 = 0.005;

/// Gap between consecutive lines of a family, in units of ε.
pub const GRID_SPACING: f64 = 1.5;

/// `n/2` almost horizontal and `n/2` almost vertical lines forming a grid of
/// cells about `1.5ε` wide. Tilts alternate in sign and grow slowly in
/// magnitude so no two lines are parallel.
pub fn lower_bound_lines(n: usize, eps: f64, tilt: f64) -> Result<Vec<Line>> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n must be even and at least 4, got {n}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if !(tilt > 0.0 && tilt <= 0.01) {
        return Err(Error::InvalidParameter(format!("tilt must lie in (0, 0.01], got {tilt}")));
    }
    let k = n / 2;
    let h = GRID_SPACING * eps;
    let mut out = Vec::with_capacity(n);
    for vertical in [false, true] {
        for i in 0..k {
            let off = (i as f64 - 0.5 * (k - 1) as f64) * h;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let a = sign * tilt * (0.5 + 0.5 * (i + 1) as f64 / k as f64);
            let (anchor, dir) = if vertical {
                (Point::new(off, 0.0), Point::new(-a.sin(), a.cos()))
            } else {
                (Point::new(0.0, off), Point::new(a.cos(), a.sin()))
            };
            out.push(Line::through(anchor, anchor + dir)?);
        }
    }
    Ok(out)
}

fn intersection(a: &Line, b: &Line) -> Option<Point> {
    let det = a.a * b.b - a.b * b.a;
    if det.abs() < 1e-3 {
        return None;
    }
    Some(Point::new((a.c * b.b - a.b * b.c) / det, (a.a * b.c - a.c * b.a) / det))
}

/// `n` random lines through `bbox`. A line is redrawn when it is nearly
/// parallel to an earlier one, meets one outside `bbox` grown by its own
/// size, or passes through an existing crossing.
pub fn random_lines(n: usize, seed: u64, bbox: Rect) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let far = bbox.expand(bbox.width().max(bbox.height()));
    let mut lines: Vec<Line> = Vec::with_capacity(n);
    let mut crossings: Vec<Point> = Vec::new();
    while lines.len() < n {
        let p = Point::new(rng.gen_range(bbox.min.x..bbox.max.x), rng.gen_range(bbox.min.y..bbox.max.y));
        let t: f64 = rng.gen_range(0.0..PI);
        let Ok(l) = Line::through(p, p + Point::new(t.cos(), t.sin())) else { continue };
        let mut new = Vec::with_capacity(lines.len());
        let ok = lines.iter().all(|m| match intersection(&l, m) {
            Some(x) if far.contains(x) && crossings.iter().all(|c| c.dist(x) > 1e-6) => {
                new.push(x);
                true
            }
            _ => false,
        });
        if ok {
            lines.push(l);
            crossings.extend(new);
        }
    }
    lines
}

/// `n` random segments with endpoints in `bbox` and length at most
/// `max_len`, redrawn when they overlap an earlier one along a common line
/// or share an endpoint with it.
pub fn random_segments(n: usize, seed: u64, bbox: Rect, max_len: f64) -> Vec<Segment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Segment> = Vec::with_capacity(n);
    while out.len() < n {
        let p = Point::new(rng.gen_range(bbox.min.x..bbox.max.x), rng.gen_range(bbox.min.y..bbox.max.y));
        let t: f64 = rng.gen_range(0.0..TAU);
        let len = rng.gen_range(0.2 * max_len..max_len);
        let q = p + Point::new(t.cos(), t.sin()) * len;
        if !bbox.contains(q) {
            continue;
        }
        let s = Segment { p, q };
        let bad = out.iter().any(|o| {
            let d = (s.q - s.p).cross(o.q - o.p).abs() / (s.length() * o.length());
            d < 1e-3 || [o.p, o.q].iter().any(|&e| s.dist_to(e) < 1e-6) || [s.p, s.q].iter().any(|&e| o.dist_to(e) < 1e-6)
        });
        if !bad {
            out.push(s);
        }
    }
    out
}

/// Trajectories through the origin along `arms` evenly spread directions.
/// Each one enters along an arm and leaves along the one opposite (or
/// nearly so), shifted sideways by up to `jitter`.
pub fn cross_trajectories(arms: usize, per_arm: usize, jitter: f64, seed: u64) -> Result<Vec<Polyline>> {
    if !(2..=8).contains(&arms) {
        return Err(Error::InvalidParameter(format!("arms must lie in 2..=8, got {arms}")));
    }
    if jitter < 0.0 {
        return Err(Error::InvalidParameter(format!("jitter must be nonnegative, got {jitter}")));
    }
    const REACH: f64 = 4.0;
    const STEP: f64 = 0.25;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j = || if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 };
    let dir = |a: usize| {
        let t = TAU * a as f64 / arms as f64;
        Point::new(t.cos(), t.sin())
    };
    let mut out = Vec::with_capacity(arms * per_arm);
    for a in 0..arms {
        let b = (a + arms / 2) % arms;
        let (ua, ub) = (dir(a), dir(b));
        for k in 0..per_arm {
            let (ja, jb) = (j(), j());
            let (oa, ob) = (ua.perp() * ja, ub.perp() * jb);
            let steps = (REACH / STEP) as usize;
            let mut v: Vec<Point> = (0..steps).map(|i| ua * (REACH - i as f64 * STEP) + oa).collect();
            v.push((oa + ob) * 0.5);
            v.extend((1..=steps).map(|i| ub * (i as f64 * STEP) + ob));
            v.dedup();
            out.push(Polyline::new(format!("arm{a}-{k}"), v)?);
        }
    }
    Ok(out)
}
