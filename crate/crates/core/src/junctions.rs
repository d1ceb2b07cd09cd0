//! Junction detection in trajectory data with the unit square as probe.
//!
//! For a point `p`, every maximal piece of a trajectory that stays inside the
//! square centered at `p`, crosses into and out of it, and meets the smaller
//! concentric square is salient. The boundary coordinates where salient
//! pieces enter and leave are clustered at granularity ε; three or more
//! clusters make `p` junction-like.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::perimeter::{PerimeterCoord, ShapeKind};
use crate::{Error, Point, Polyline, Rect, Result};

/// Side of the inner square relative to the probe square.
pub const DEFAULT_INNER_SIDE: f64 = 0.5;

const PARAM_TOL: f64 = 1e-9;
const COORD_TOL: f64 = 1e-7;

/// Position along a polyline: edge index and parameter on that edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolylinePos {
    pub edge: usize,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalientSubtrajectory {
    /// Index of the trajectory in the input.
    pub source: usize,
    pub source_id: String,
    pub start: PolylinePos,
    pub end: PolylinePos,
    pub entry: PerimeterCoord,
    pub exit: PerimeterCoord,
}

fn probe(p: Point, side: f64) -> Rect {
    let h = 0.5 * side;
    Rect::new(p - Point::new(h, h), p + Point::new(h, h))
}

/// Parameter interval of segment `a → b` inside the closed rectangle.
fn clip(r: &Rect, a: Point, b: Point) -> Option<(f64, f64)> {
    let (lo, hi) = r.clip_line(a, b - a)?;
    let (lo, hi) = (lo.max(0.0), hi.min(1.0));
    (lo <= hi).then_some((lo, hi))
}

fn coord(p: Point, at: Point) -> PerimeterCoord {
    let v = at - p;
    let s = ShapeKind::Square.coord_of_offset(v, COORD_TOL).unwrap_or_else(|| {
        // clipping noise only; project onto the nearest side
        let m = v.max_abs().max(f64::MIN_POSITIVE);
        ShapeKind::Square.coord_of_offset(v * (0.5 / m), COORD_TOL).unwrap_or(0.0)
    });
    PerimeterCoord { shape: ShapeKind::Square, center: p, s }
}

pub fn salient_subtrajectories(trajectories: &[Polyline], p: Point) -> Vec<SalientSubtrajectory> {
    salient_subtrajectories_with(trajectories, p, DEFAULT_INNER_SIDE)
}

/// Salient pieces for an inner square of side `inner_side`.
pub fn salient_subtrajectories_with(trajectories: &[Polyline], p: Point, inner_side: f64) -> Vec<SalientSubtrajectory> {
    let outer = probe(p, 1.0);
    let inner = probe(p, inner_side);
    let mut out = Vec::new();
    for (ti, tr) in trajectories.iter().enumerate() {
        let v = &tr.vertices;
        let last = v.len() - 1;
        // maximal runs inside the closed square, as (start, end, meets inner)
        let mut run: Option<(PolylinePos, PolylinePos, bool)> = None;
        let close = |run: Option<(PolylinePos, PolylinePos, bool)>, out: &mut Vec<SalientSubtrajectory>| {
            let Some((s, e, hit)) = run else { return };
            let at_start = s.edge == 0 && s.t <= PARAM_TOL;
            let at_end = e.edge + 1 == last && e.t >= 1.0 - PARAM_TOL;
            if hit && !at_start && !at_end {
                let ps = v[s.edge].lerp(v[s.edge + 1], s.t);
                let pe = v[e.edge].lerp(v[e.edge + 1], e.t);
                out.push(SalientSubtrajectory {
                    source: ti,
                    source_id: tr.id.clone(),
                    start: s,
                    end: e,
                    entry: coord(p, ps),
                    exit: coord(p, pe),
                });
            }
        };
        for k in 0..last {
            let (a, b) = (v[k], v[k + 1]);
            let Some((t0, t1)) = clip(&outer, a, b) else {
                close(run.take(), &mut out);
                continue;
            };
            let hit = clip(&inner, a.lerp(b, t0), a.lerp(b, t1)).is_some();
            let here = (PolylinePos { edge: k, t: t0 }, PolylinePos { edge: k, t: t1 });
            run = match run.take() {
                Some((s, e, h)) if t0 <= PARAM_TOL && e.edge + 1 == k && e.t >= 1.0 - PARAM_TOL => Some((s, here.1, h || hit)),
                prev => {
                    close(prev, &mut out);
                    Some((here.0, here.1, hit))
                }
            };
            if t1 < 1.0 - PARAM_TOL {
                close(run.take(), &mut out);
            }
        }
        close(run.take(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Member coordinates in boundary order from `start`.
    pub members: Vec<f64>,
    pub start: f64,
    /// Boundary length from the first member to the last.
    pub span: f64,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster holding coordinate `s`, if `s` is one of the members.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        self.clusters.iter().position(|c| c.members.contains(&s))
    }
}

/// Groups boundary coordinates by the transitive closure of being at most
/// `eps` apart along a boundary of length `perimeter`.
pub fn epsilon_cluster(coords: &[f64], perimeter: f64, eps: f64) -> ClusterSet {
    if coords.is_empty() {
        return ClusterSet::default();
    }
    let mut s: Vec<f64> = coords.iter().map(|c| c.rem_euclid(perimeter)).collect();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let gap = |i: usize| if i + 1 < n { s[i + 1] - s[i] } else { s[0] + perimeter - s[n - 1] };
    let breaks: Vec<usize> = (0..n).filter(|&i| gap(i) > eps).collect();
    if breaks.is_empty() {
        // everything chains around; start after the widest gap
        let w = (0..n).max_by(|&a, &b| gap(a).total_cmp(&gap(b)).then(b.cmp(&a))).unwrap();
        let members: Vec<f64> = (1..=n).map(|k| s[(w + k) % n]).collect();
        let start = members[0];
        return ClusterSet { clusters: vec![Cluster { members, start, span: perimeter - gap(w) }] };
    }
    let mut clusters = Vec::with_capacity(breaks.len());
    for (bi, &b) in breaks.iter().enumerate() {
        let next = breaks[(bi + 1) % breaks.len()];
        let first = (b + 1) % n;
        let count = (next + n - b - 1) % n + 1;
        let members: Vec<f64> = (0..count).map(|k| s[(first + k) % n]).collect();
        let start = members[0];
        let span = (members[count - 1] - start).rem_euclid(perimeter);
        clusters.push(Cluster { members, start, span });
    }
    clusters.sort_by(|a, b| a.start.total_cmp(&b.start));
    ClusterSet { clusters }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum JunctionKind {
    None,
    Crossing,
    RealJunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JunctionAssessment {
    pub point: Point,
    pub clusters: ClusterSet,
    pub junction_like: bool,
    pub kind: JunctionKind,
    pub significance: f64,
}

pub fn assess(p: Point, trajectories: &[Polyline], eps: f64) -> JunctionAssessment {
    assess_with(p, trajectories, eps, DEFAULT_INNER_SIDE)
}

pub fn assess_with(p: Point, trajectories: &[Polyline], eps: f64, inner_side: f64) -> JunctionAssessment {
    let subs = salient_subtrajectories_with(trajectories, p, inner_side);
    let coords: Vec<f64> = subs.iter().flat_map(|s| [s.entry.s, s.exit.s]).collect();
    let clusters = epsilon_cluster(&coords, ShapeKind::Square.perimeter(), eps);
    let c = clusters.len();
    let junction_like = c >= 3;
    let kind = if !junction_like {
        JunctionKind::None
    } else if pairs_up(&clusters, &subs) {
        JunctionKind::Crossing
    } else {
        JunctionKind::RealJunction
    };
    let s_min = clusters.clusters.iter().map(Cluster::size).min().unwrap_or(0);
    let mut significance = if junction_like { (c - 2) as f64 * s_min as f64 } else { 0.0 };
    if kind == JunctionKind::RealJunction {
        significance *= 2.0;
    }
    JunctionAssessment { point: p, clusters, junction_like, kind, significance }
}

/// Whether entry and exit clusters link every cluster to exactly one other.
fn pairs_up(clusters: &ClusterSet, subs: &[SalientSubtrajectory]) -> bool {
    let mut partners = vec![BTreeSet::new(); clusters.len()];
    for s in subs {
        let (Some(a), Some(b)) = (clusters.index_of(s.entry.s), clusters.index_of(s.exit.s)) else {
            return false;
        };
        if a == b {
            return false;
        }
        partners[a].insert(b);
        partners[b].insert(a);
    }
    partners.iter().all(|p| p.len() == 1)
}

/// Assessments at the points `bbox.min + (i, j)·spacing`, stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceGrid {
    pub bbox: Rect,
    pub spacing: f64,
    pub cols: usize,
    pub rows: usize,
    pub cells: Vec<JunctionAssessment>,
}

impl SignificanceGrid {
    pub fn point(&self, row: usize, col: usize) -> Point {
        self.bbox.min + Point::new(col as f64 * self.spacing, row as f64 * self.spacing)
    }

    pub fn cell(&self, row: usize, col: usize) -> &JunctionAssessment {
        &self.cells[row * self.cols + col]
    }

    /// Row-major significance values.
    pub fn significance(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.significance).collect()
    }
}

pub fn grid_scan(trajectories: &[Polyline], eps: f64, bbox: Rect, spacing: f64) -> Result<SignificanceGrid> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!("spacing must be positive, got {spacing}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
    }
    if bbox.is_empty() {
        return Err(Error::InvalidParameter("empty bounding box".into()));
    }
    let cols = (bbox.width() / spacing - 1e-9).ceil().max(0.0) as usize + 1;
    let rows = (bbox.height() / spacing - 1e-9).ceil().max(0.0) as usize + 1;
    let boxes: Vec<Rect> = trajectories
        .iter()
        .map(|t| t.vertices.iter().fold(Rect::empty(), |mut r, &v| {
            r.include(v);
            r
        }))
        .collect();
    let cells = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let p = bbox.min + Point::new((idx % cols) as f64 * spacing, (idx / cols) as f64 * spacing);
            let near: Vec<Polyline> =
                trajectories.iter().zip(&boxes).filter(|(_, b)| b.intersects(&probe(p, 1.0))).map(|(t, _)| t.clone()).collect();
            assess(p, &near, eps)
        })
        .collect();
    Ok(SignificanceGrid { bbox, spacing, cols, rows, cells })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedJunction {
    pub row: usize,
    pub col: usize,
    pub point: Point,
    /// Number of junction-like cells in the group.
    pub group_size: usize,
    pub assessment: JunctionAssessment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopK {
    pub junctions: Vec<RankedJunction>,
    /// Set when fewer than `k` groups exist.
    pub fewer_than_k: bool,
}

/// One representative per 4-connected group of junction-like cells, ranked
/// by significance. Within a group the most significant cell wins; ties go
/// to the cell nearest the group's centroid, then to the lowest row and
/// column.
pub fn top_k(grid: &SignificanceGrid, k: usize) -> Result<TopK> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (rows, cols) = (grid.rows, grid.cols);
    let mut seen = vec![false; rows * cols];
    let mut reps = Vec::new();
    for start in 0..rows * cols {
        if seen[start] || !grid.cells[start].junction_like {
            continue;
        }
        seen[start] = true;
        let mut group = vec![start];
        let mut i = 0;
        while i < group.len() {
            let (r, c) = (group[i] / cols, group[i] % cols);
            let mut nb = Vec::with_capacity(4);
            if r > 0 {
                nb.push(group[i] - cols);
            }
            if r + 1 < rows {
                nb.push(group[i] + cols);
            }
            if c > 0 {
                nb.push(group[i] - 1);
            }
            if c + 1 < cols {
                nb.push(group[i] + 1);
            }
            for n in nb {
                if !seen[n] && grid.cells[n].junction_like {
                    seen[n] = true;
                    group.push(n);
                }
            }
            i += 1;
        }
        let m = group.len() as f64;
        let (cr, cc) = group.iter().fold((0.0, 0.0), |(a, b), &g| (a + (g / cols) as f64 / m, b + (g % cols) as f64 / m));
        let d2 = |g: usize| ((g / cols) as f64 - cr).powi(2) + ((g % cols) as f64 - cc).powi(2);
        let best = *group
            .iter()
            .min_by(|&&a, &&b| {
                grid.cells[b]
                    .significance
                    .total_cmp(&grid.cells[a].significance)
                    .then(d2(a).total_cmp(&d2(b)))
                    .then(a.cmp(&b))
            })
            .unwrap();
        reps.push((best, group.len()));
    }
    reps.sort_by(|&(a, _), &(b, _)| grid.cells[b].significance.total_cmp(&grid.cells[a].significance).then(a.cmp(&b)));
    let fewer_than_k = reps.len() < k;
    let junctions = reps
        .into_iter()
        .take(k)
        .map(|(idx, group_size)| {
            let (row, col) = (idx / cols, idx % cols);
            RankedJunction { row, col, point: grid.point(row, col), group_size, assessment: grid.cells[idx].clone() }
        })
        .collect();
    Ok(TopK { junctions, fewer_than_k })
}
