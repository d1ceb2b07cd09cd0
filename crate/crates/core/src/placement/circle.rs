//! Circle placements over convex cells of a line arrangement. An ε-arc
//! running counterclockwise from angle θ to θ + ε enters the cell through
//! edge `i` and leaves through edge `j`; the two incidence equations are
//! linear in the center, so the center traces an ellipse as θ varies.

use std::f64::consts::PI;

use super::chain::{chain_pieces, is_convex_chain, split_convex};
use super::{CriticalCurve, CurvePiece, EllipticArc, TranslationVector};
use crate::arrangement::{Arrangement, EdgeSource};
use crate::error::{Error, Result};
use crate::Point;

/// Edge line `n·x = c` with inward unit normal `n`.
#[derive(Debug, Clone, Copy)]
struct EdgeLine {
    n: Point,
    c: f64,
    clip: bool,
}

impl EdgeLine {
    fn s(&self, x: Point) -> f64 {
        self.n.dot(x) - self.c
    }

    fn angle(&self) -> f64 {
        self.n.y.atan2(self.n.x)
    }

    /// Minimum of `cos(φ − α)` over `φ ∈ [θ, θ + w]`.
    fn min_cos(&self, theta: f64, w: f64) -> f64 {
        let a = (theta - self.angle()).rem_euclid(2.0 * PI);
        if a <= PI && a + w >= PI {
            -1.0
        } else {
            a.cos().min((a + w).cos())
        }
    }
}

fn unit(t: f64) -> Point {
    Point::new(t.cos(), t.sin())
}

fn unit_d(t: f64) -> Point {
    Point::new(-t.sin(), t.cos())
}

fn rotate(p: Point, a: f64) -> Point {
    let (s, c) = a.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

/// Center as a function of θ: `p0 + K·(cos θ, sin θ)`, `K = [k1 k2]` by columns.
#[derive(Debug, Clone, Copy)]
struct Ellipse {
    p0: Point,
    k1: Point,
    k2: Point,
}

impl Ellipse {
    fn at(&self, t: f64) -> Point {
        self.p0 + self.k1 * t.cos() + self.k2 * t.sin()
    }
}

fn solve2(r1: Point, r2: Point, b: (f64, f64)) -> Option<Point> {
    let det = r1.x * r2.y - r1.y * r2.x;
    if det.abs() < 1e-12 {
        return None;
    }
    Some(Point::new((b.0 * r2.y - r1.y * b.1) / det, (r1.x * b.1 - b.0 * r2.x) / det))
}

fn ellipse_for(ei: &EdgeLine, ej: &EdgeLine, eps: f64) -> Option<Ellipse> {
    // n_i·(p + U(θ)) = c_i,  n_j·(p + U(θ + ε)) = c_j
    let mj = rotate(ej.n, -eps);
    let p0 = solve2(ei.n, ej.n, (ei.c, ej.c))?;
    // columns of −M⁻¹N, N = [n_i; m_j]
    let k1 = solve2(ei.n, ej.n, (-ei.n.x, -mj.x))?;
    let k2 = solve2(ei.n, ej.n, (-ei.n.y, -mj.y))?;
    Some(Ellipse { p0, k1, k2 })
}

/// How far a center is from violating the arc conditions; positive means valid.
fn margin(edges: &[EdgeLine], i: usize, j: usize, p: Point, theta: f64, eps: f64) -> f64 {
    let (ei, ej) = (&edges[i], &edges[j]);
    let mut m = ei.n.dot(unit_d(theta));
    m = m.min(-ej.n.dot(unit_d(theta + eps)));
    if i != j {
        m = m.min(ei.s(p + unit(theta + eps)));
        m = m.min(ej.s(p + unit(theta)));
    }
    for (k, e) in edges.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        m = m.min(e.s(p) + e.min_cos(theta, eps));
    }
    m
}

/// Maximal subintervals of `[lo, hi]` where `f > 0`.
fn positive_intervals(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    const N: usize = 96;
    let xs: Vec<f64> = (0..=N).map(|k| lo + (hi - lo) * k as f64 / N as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let refine = |mut a: f64, mut b: f64| {
        // f(a) > 0 ≥ f(b) or the reverse; returns the crossing
        let fa = f(a) > 0.0;
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == fa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for k in 0..=N {
        let pos = vals[k] > 0.0;
        match (start, pos) {
            (None, true) => start = Some(if k == 0 { lo } else { refine(xs[k], xs[k - 1]) }),
            (Some(s), false) => {
                out.push((s, refine(xs[k - 1], xs[k])));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, hi));
    }
    out.retain(|(a, b)| b - a > 1e-12);
    out
}

/// Principal form of the arc `θ ∈ [a, b]` of an ellipse, or straight
/// segments when the ellipse is flat.
fn principal_pieces(el: &Ellipse, a: f64, b: f64) -> Vec<CurvePiece> {
    let (k11, k12, k21, k22) = (el.k1.x, el.k2.x, el.k1.y, el.k2.y);
    let e = 0.5 * (k11 + k22);
    let f = 0.5 * (k11 - k22);
    let g = 0.5 * (k21 + k12);
    let h = 0.5 * (k21 - k12);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let (sx, sy) = (q + r, q - r);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let shift = 0.5 * (a2 - a1);
    let rot = 0.5 * (a2 + a1);
    let (sign, ay) = if sy < 0.0 { (-1.0, -sy) } else { (1.0, sy) };
    if ay < 1e-9 {
        // flat: the center slides back and forth along one axis
        let mut cuts = vec![a];
        let first = ((a + shift) / PI).floor() as i64 + 1;
        let mut k = first;
        while (k as f64) * PI - shift < b {
            cuts.push(k as f64 * PI - shift);
            k += 1;
        }
        cuts.push(b);
        return cuts
            .windows(2)
            .filter(|w| w[1] - w[0] > 1e-12)
            .map(|w| CurvePiece::Segment { a: el.at(w[0]), b: el.at(w[1]) })
            .filter(|p| p.length() > 1e-12)
            .collect();
    }
    vec![CurvePiece::Arc(EllipticArc { center: el.p0, ax: sx, ay, rot, t0: sign * (a + shift), t1: sign * (b + shift) })]
}

/// Critical curves of a unit circle for one angular vector inside a convex
/// cell, grouped into convex chains.
pub fn circle_cell_curves(arr: &Arrangement, cell: usize, tv: &TranslationVector, spacing: f64, eps: f64) -> Result<Vec<CriticalCurve>> {
    if eps >= 1.0 {
        return Err(Error::EpsilonTooLarge(eps));
    }
    let c = &arr.cells[cell];
    if !c.convex {
        return Err(Error::Unsupported("cell is not convex".into()));
    }
    let edges: Vec<EdgeLine> = c
        .edges
        .iter()
        .map(|e| {
            let d = e.b - e.a;
            let n = d.perp() * (1.0 / d.norm());
            EdgeLine { n, c: n.dot(e.a), clip: e.source == EdgeSource::Clip }
        })
        .collect();
    let (lo, hi) = (tv.s - spacing, tv.s);
    let mut pieces = Vec::new();
    for i in 0..edges.len() {
        if edges[i].clip {
            continue;
        }
        for j in 0..edges.len() {
            if edges[j].clip {
                continue;
            }
            let cross = edges[i].n.cross(edges[j].n);
            if i != j && cross.abs() > 1e-9 {
                let Some(el) = ellipse_for(&edges[i], &edges[j], eps) else { continue };
                let f = |t: f64| margin(&edges, i, j, el.at(t), t, eps);
                for (a, b) in positive_intervals(f, lo, hi) {
                    pieces.extend(principal_pieces(&el, a, b));
                }
            } else if i == j || edges[i].n.dot(edges[j].n) < 0.0 {
                pieces.extend(sliding_pieces(&edges, i, j, eps, lo, hi));
            }
        }
    }
    let scale = arr.clip_box.max.max_abs().max(arr.clip_box.min.max_abs()).max(1.0);
    let mut curves = Vec::new();
    for ch in chain_pieces(&pieces, 1e-8 * scale) {
        for part in split_convex(ch) {
            let convex = is_convex_chain(&part);
            curves.push(CriticalCurve { cell, vector: *tv, pieces: part, convex });
        }
    }
    Ok(curves)
}

/// Both crossings on one line, or on two parallel lines: θ is fixed and the
/// center slides along the line.
fn sliding_pieces(edges: &[EdgeLine], i: usize, j: usize, eps: f64, lo: f64, hi: f64) -> Vec<CurvePiece> {
    let ei = &edges[i];
    let alpha = ei.angle();
    let thetas: Vec<f64> = if i == j {
        vec![alpha - 0.5 * eps]
    } else {
        let w = -edges[j].c - ei.c;
        let r = w / (2.0 * (0.5 * eps).sin());
        if r.abs() >= 1.0 - 1e-12 {
            return Vec::new();
        }
        let s = r.asin();
        vec![alpha - 0.5 * eps - s, alpha - 0.5 * eps - PI + s]
    };
    let mut out = Vec::new();
    for t in thetas {
        // bring into [lo, hi)
        let t = lo + (t - lo).rem_euclid(2.0 * PI);
        if t >= hi {
            continue;
        }
        if ei.n.dot(unit_d(t)) <= 0.0 || -edges[j].n.dot(unit_d(t + eps)) <= 0.0 {
            continue;
        }
        let p0 = ei.n * (ei.c - ei.n.dot(unit(t)));
        let dir = ei.n.perp();
        let (mut tlo, mut thi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (k, e) in edges.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            // e.s(p0 + s·dir) + min_cos ≥ 0
            let a0 = e.s(p0) + e.min_cos(t, eps);
            let a1 = e.n.dot(dir);
            if a1.abs() < 1e-15 {
                if a0 < 0.0 {
                    tlo = f64::INFINITY;
                }
            } else if a1 > 0.0 {
                tlo = tlo.max(-a0 / a1);
            } else {
                thi = thi.min(-a0 / a1);
            }
        }
        if tlo.is_finite() && thi.is_finite() && thi - tlo > 1e-12 {
            out.push(CurvePiece::Segment { a: p0 + dir * tlo, b: p0 + dir * thi });
        }
    }
    out
}
