//! Half-edge structure built from a soup of segments.
//!
//! Segments are split at every pairwise intersection, coincident points are
//! merged within a tolerance, and face cycles are traced with the face on the
//! left of each half-edge.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::TAU;

use crate::geom::{point_in_polygon, polygon_area2, segment_intersection};
use crate::{Point, Rect};

/// Where an arrangement edge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeSource {
    /// Index of an input line or segment.
    Primitive(usize),
    /// Boundary of the clip box.
    Clip,
    /// Decomposition ray added inside a nonconvex cell.
    Ray,
}

impl EdgeSource {
    pub fn is_primitive(self) -> bool {
        matches!(self, EdgeSource::Primitive(_))
    }
}

#[derive(Debug, Clone)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
    pub source: EdgeSource,
}

/// A traced face: one outer cycle plus hole cycles.
#[derive(Debug, Clone)]
pub struct Face {
    /// Counterclockwise cycle; empty for the unbounded face.
    pub outer: Vec<usize>,
    pub holes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct Dcel {
    pub vertices: Vec<Point>,
    /// True when the vertex coincides with an endpoint of an input segment.
    pub endpoint: Vec<bool>,
    pub half_edges: Vec<HalfEdge>,
    /// Face 0 is the unbounded face.
    pub faces: Vec<Face>,
    pub components: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct InputSegment {
    pub a: Point,
    pub b: Point,
    pub source: EdgeSource,
    /// Whether `a`/`b` should be flagged as segment endpoints.
    pub mark_endpoints: bool,
}

struct VertexPool {
    pts: Vec<Point>,
    grid: HashMap<(i64, i64), Vec<usize>>,
    cell: f64,
    tol: f64,
}

impl VertexPool {
    fn new(tol: f64) -> Self {
        Self { pts: Vec::new(), grid: HashMap::new(), cell: tol * 4.0, tol }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &i in ids {
                        if self.pts[i].dist(p) <= self.tol {
                            return i;
                        }
                    }
                }
            }
        }
        let id = self.pts.len();
        self.pts.push(p);
        self.grid.entry((kx, ky)).or_default().push(id);
        id
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

fn bbox(a: Point, b: Point) -> Rect {
    let mut r = Rect::empty();
    r.include(a);
    r.include(b);
    r
}

pub fn build(segments: &[InputSegment], merge_tol: f64) -> Dcel {
    let mut pool = VertexPool::new(merge_tol);
    let n = segments.len();
    let mut splits: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    let mut endpoint_ids = BTreeSet::new();

    for (i, s) in segments.iter().enumerate() {
        let va = pool.insert(s.a);
        let vb = pool.insert(s.b);
        splits[i].push((0.0, va));
        splits[i].push((1.0, vb));
        if s.mark_endpoints {
            endpoint_ids.insert(va);
            endpoint_ids.insert(vb);
        }
    }

    let boxes: Vec<Rect> = segments.iter().map(|s| bbox(s.a, s.b).expand(merge_tol)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i].min.x.total_cmp(&boxes[j].min.x));
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if boxes[j].min.x > boxes[i].max.x {
                break;
            }
            if !boxes[i].intersects(&boxes[j]) {
                continue;
            }
            let si = crate::Segment { p: segments[i].a, q: segments[i].b };
            let sj = crate::Segment { p: segments[j].a, q: segments[j].b };
            if let Some((t, u)) = segment_intersection(&si, &sj, 1e-12) {
                let p = si.at(t);
                let v = pool.insert(p);
                splits[i].push((t, v));
                splits[j].push((u, v));
            } else {
                // collinear overlaps: split each at the other's endpoints
                for (a, sa, other) in [(i, si, sj), (j, sj, si)] {
                    for end in [other.p, other.q] {
                        if sa.dist_to(end) <= merge_tol {
                            let d = sa.q - sa.p;
                            let t = ((end - sa.p).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                            let v = pool.insert(end);
                            splits[a].push((t, v));
                        }
                    }
                }
            }
        }
    }

    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edges: Vec<(usize, usize, EdgeSource)> = Vec::new();
    for (i, sp) in splits.iter_mut().enumerate() {
        sp.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut prev: Option<usize> = None;
        for &(_, v) in sp.iter() {
            if let Some(u) = prev {
                if u != v {
                    let key = (u.min(v), u.max(v));
                    if edge_set.insert(key) {
                        edges.push((u, v, segments[i].source));
                    }
                }
            }
            if prev != Some(v) {
                prev = Some(v);
            }
        }
    }

    let vertices = pool.pts;
    let nv = vertices.len();
    let mut half_edges = Vec::with_capacity(edges.len() * 2);
    for (e, &(u, v, source)) in edges.iter().enumerate() {
        half_edges.push(HalfEdge { origin: u, twin: 2 * e + 1, next: usize::MAX, face: usize::MAX, source });
        half_edges.push(HalfEdge { origin: v, twin: 2 * e, next: usize::MAX, face: usize::MAX, source });
    }

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (h, he) in half_edges.iter().enumerate() {
        outgoing[he.origin].push(h);
    }
    let angle = |h: usize| {
        let a = vertices[half_edges[h].origin];
        let b = vertices[half_edges[half_edges[h].twin].origin];
        (b.y - a.y).atan2(b.x - a.x)
    };
    for out in outgoing.iter_mut() {
        out.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    }
    let mut pos_in_vertex = vec![0usize; half_edges.len()];
    for out in &outgoing {
        for (k, &h) in out.iter().enumerate() {
            pos_in_vertex[h] = k;
        }
    }
    for h in 0..half_edges.len() {
        let t = half_edges[h].twin;
        let v = half_edges[t].origin;
        let out = &outgoing[v];
        let k = pos_in_vertex[t];
        half_edges[h].next = out[(k + out.len() - 1) % out.len()];
    }

    // trace cycles
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut cycle_of = vec![usize::MAX; half_edges.len()];
    for h in 0..half_edges.len() {
        if cycle_of[h] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut cur = h;
        loop {
            cycle_of[cur] = id;
            cyc.push(cur);
            cur = half_edges[cur].next;
            if cur == h {
                break;
            }
        }
        cycles.push(cyc);
    }

    let mut uf = UnionFind::new(nv);
    for &(u, v, _) in &edges {
        uf.union(u, v);
    }
    let mut roots = BTreeSet::new();
    for (v, out) in outgoing.iter().enumerate() {
        if !out.is_empty() {
            roots.insert(uf.find(v));
        }
    }
    let components = roots.len();

    let poly = |cyc: &[usize]| -> Vec<Point> { cyc.iter().map(|&h| vertices[half_edges[h].origin]).collect() };
    let mut faces = vec![Face { outer: Vec::new(), holes: Vec::new() }];
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    let areas: Vec<f64> = cycles.iter().map(|cyc| polygon_area2(&poly(cyc)) * 0.5).collect();
    // each connected component has exactly one outer cycle: the most negative one
    let mut outer_of: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (c, cyc) in cycles.iter().enumerate() {
        let comp = uf.find(half_edges[cyc[0]].origin);
        let e = outer_of.entry(comp).or_insert(c);
        if areas[c] < areas[*e] {
            *e = c;
        }
    }
    let is_outer: BTreeSet<usize> = outer_of.values().copied().collect();
    for (c, cyc) in cycles.iter().enumerate() {
        if !is_outer.contains(&c) {
            face_of_cycle[c] = faces.len();
            faces.push(Face { outer: cyc.clone(), holes: Vec::new() });
        }
    }
    for (c, cyc) in cycles.iter().enumerate() {
        if face_of_cycle[c] != usize::MAX {
            continue;
        }
        let comp = uf.find(half_edges[cyc[0]].origin);
        let probe = vertices[half_edges[cyc[0]].origin];
        let mut best: Option<(f64, usize)> = None;
        for (f, face) in faces.iter().enumerate().skip(1) {
            if uf.find(half_edges[face.outer[0]].origin) == comp {
                continue;
            }
            let a = areas[cycle_of[face.outer[0]]];
            if best.is_some_and(|(ba, _)| ba <= a) {
                continue;
            }
            if point_in_polygon(&poly(&face.outer), probe) {
                best = Some((a, f));
            }
        }
        let f = best.map_or(0, |(_, f)| f);
        face_of_cycle[c] = f;
        faces[f].holes.push(cyc.clone());
    }
    for (h, he) in half_edges.iter_mut().enumerate() {
        he.face = face_of_cycle[cycle_of[h]];
    }

    let endpoint = (0..nv).map(|v| endpoint_ids.contains(&v)).collect();
    Dcel { vertices, endpoint, half_edges, faces, components }
}

impl Dcel {
    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn target(&self, h: usize) -> usize {
        self.half_edges[self.half_edges[h].twin].origin
    }

    pub fn cycle_points(&self, cyc: &[usize]) -> Vec<Point> {
        cyc.iter().map(|&h| self.vertices[self.half_edges[h].origin]).collect()
    }

    /// Direction angle of a half-edge in `[0, 2π)`.
    pub fn angle(&self, h: usize) -> f64 {
        let a = self.vertices[self.half_edges[h].origin];
        let b = self.vertices[self.target(h)];
        (b.y - a.y).atan2(b.x - a.x).rem_euclid(TAU)
    }
}
