//! Planar primitives shared by every other module.
//!
//! Everything here is generic over [`Scalar`] so the predicates can be run in
//! `f32` for quick experiments; the algorithms in the rest of the crate use
//! the `f64` aliases exported from the crate root.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::GeomError;

/// Floating point scalar usable by the geometric kernel.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static {
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3d cross product.
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self).scale(t)
    }

    pub fn midpoint(self, o: Self) -> Self {
        self.lerp(o, T::lit(0.5))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs())
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::from(self.x).unwrap(), U::from(self.y).unwrap())
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Tolerances used by the float predicates and by oracle comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Coincidence tolerance.
    pub eps_geom: f64,
    /// Oracle match tolerance.
    pub eps_verify: f64,
    /// Resolve near-zero determinants with exact rational arithmetic.
    pub exact_fallback: bool,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { eps_geom: 1e-9, eps_verify: 1e-6, exact_fallback: true }
    }
}

impl ToleranceConfig {
    pub fn validate(&self, eps: Option<f64>) -> Result<(), GeomError> {
        let ok = self.eps_geom > 0.0
            && self.eps_geom < self.eps_verify
            && eps.is_none_or(|e| self.eps_verify < e);
        if ok {
            Ok(())
        } else {
            Err(GeomError::BadTolerance)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Twice the signed area of the triangle `pqr`.
pub fn signed_area2<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>) -> T {
    (q - p).cross(r - p)
}

/// Orientation of `r` relative to the directed line `pq`.
///
/// The triple counts as collinear when the signed area is within `eps_geom`
/// scaled by the squared magnitude of the input.
pub fn orientation<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>, tol: &ToleranceConfig) -> Orientation {
    let det = signed_area2(p, q, r);
    let mag = T::one().max(p.max_abs()).max(q.max_abs()).max(r.max_abs());
    let thresh = T::lit(tol.eps_geom) * mag * mag;
    if det.abs() <= thresh {
        Orientation::Collinear
    } else if det > T::zero() {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

fn to_rational<T: Scalar>(v: T) -> BigRational {
    BigRational::from_float(v.to_f64().unwrap()).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
}

/// Exact sign of the orientation determinant, treating the inputs as the
/// binary fractions they are.
pub fn orientation_exact<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>) -> Orientation {
    let (px, py) = (to_rational(p.x), to_rational(p.y));
    let (qx, qy) = (to_rational(q.x), to_rational(q.y));
    let (rx, ry) = (to_rational(r.x), to_rational(r.y));
    let det = (&qx - &px) * (&ry - &py) - (&qy - &py) * (&rx - &px);
    if det.is_zero() {
        Orientation::Collinear
    } else if det.is_positive() {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

/// Float orientation with an exact re-evaluation near zero. Only an exactly
/// degenerate triple reports `Collinear`.
pub fn orientation_robust<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>, tol: &ToleranceConfig) -> Orientation {
    let det = signed_area2(p, q, r);
    if tol.exact_fallback && det.abs().to_f64().unwrap() < 1e3 * tol.eps_geom {
        return orientation_exact(p, q, r);
    }
    if det > T::zero() {
        Orientation::Left
    } else if det < T::zero() {
        Orientation::Right
    } else {
        Orientation::Collinear
    }
}

/// Infinite line in normal form `a·x + b·y = c` with `a² + b² = 1` and the
/// leading nonzero coefficient positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> Line2<T> {
    pub fn through(p: Point2<T>, q: Point2<T>) -> Result<Self, GeomError> {
        let d = q - p;
        let len = d.norm();
        if !(len > T::zero()) || !p.is_finite() || !q.is_finite() {
            return Err(GeomError::DegenerateLine);
        }
        let n = d.perp().scale(T::one() / len);
        Ok(Self::from_normal(n.x, n.y, n.dot(p)))
    }

    fn from_normal(a: T, b: T, c: T) -> Self {
        let tiny = T::epsilon() * T::lit(16.0);
        let flip = a < -tiny || (a.abs() <= tiny && b < T::zero());
        if flip {
            Self { a: -a, b: -b, c: -c }
        } else {
            Self { a, b, c }
        }
    }

    /// Line `y = m·x + k`.
    pub fn slope_intercept(m: T, k: T) -> Self {
        Self::through(Point2::new(T::zero(), k), Point2::new(T::one(), m + k)).unwrap()
    }

    /// Vertical line `x = k`.
    pub fn vertical(k: T) -> Self {
        Self { a: T::one(), b: T::zero(), c: k }
    }

    pub fn normal(&self) -> Point2<T> {
        Point2::new(self.a, self.b)
    }

    /// Unit direction, the normal turned clockwise.
    pub fn direction(&self) -> Point2<T> {
        Point2::new(self.b, -self.a)
    }

    /// Foot of the perpendicular from the origin.
    pub fn anchor(&self) -> Point2<T> {
        self.normal().scale(self.c)
    }

    pub fn signed_dist(&self, p: Point2<T>) -> T {
        self.a * p.x + self.b * p.y - self.c
    }

    pub fn translate(&self, v: Point2<T>) -> Self {
        Self { a: self.a, b: self.b, c: self.c + self.a * v.x + self.b * v.y }
    }

    pub fn same_as(&self, o: &Self, eps: T) -> bool {
        (self.a - o.a).abs() <= eps && (self.b - o.b).abs() <= eps && (self.c - o.c).abs() <= eps
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineIntersection<T> {
    Point(Point2<T>),
    Parallel,
}

/// Intersection of two canonical lines.
pub fn intersect_lines<T: Scalar>(l1: &Line2<T>, l2: &Line2<T>, tol: &ToleranceConfig) -> Result<LineIntersection<T>, GeomError> {
    let det = l1.a * l2.b - l1.b * l2.a;
    if det.abs() <= T::lit(tol.eps_geom) {
        let mag = T::one().max(l1.c.abs()).max(l2.c.abs());
        if (l1.c - l2.c).abs() <= T::lit(tol.eps_geom) * mag && l1.same_as(l2, T::lit(tol.eps_geom) * mag) {
            return Err(GeomError::Coincident);
        }
        return Ok(LineIntersection::Parallel);
    }
    let x = (l1.c * l2.b - l1.b * l2.c) / det;
    let y = (l1.a * l2.c - l1.c * l2.a) / det;
    Ok(LineIntersection::Point(Point2::new(x, y)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment2<T> {
    pub p: Point2<T>,
    pub q: Point2<T>,
}

impl<T: Scalar> Segment2<T> {
    pub fn new(p: Point2<T>, q: Point2<T>) -> Result<Self, GeomError> {
        if p == q || !p.is_finite() || !q.is_finite() {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Self { p, q })
    }

    pub fn length(&self) -> T {
        self.p.dist(self.q)
    }

    pub fn at(&self, t: T) -> Point2<T> {
        self.p.lerp(self.q, t)
    }

    pub fn supporting_line(&self) -> Line2<T> {
        Line2::through(self.p, self.q).expect("segment endpoints distinct")
    }

    /// Closest distance from `x` to the segment.
    pub fn dist_to(&self, x: Point2<T>) -> T {
        let d = self.q - self.p;
        let t = ((x - self.p).dot(d) / d.norm_sq()).max(T::zero()).min(T::one());
        self.at(t).dist(x)
    }
}

/// Proper or touching intersection of two segments, as parameters on each.
pub fn segment_intersection<T: Scalar>(s: &Segment2<T>, o: &Segment2<T>, eps: T) -> Option<(T, T)> {
    let r = s.q - s.p;
    let d = o.q - o.p;
    let denom = r.cross(d);
    if denom.abs() <= eps * r.norm() * d.norm() {
        return None;
    }
    let w = o.p - s.p;
    let t = w.cross(d) / denom;
    let u = w.cross(r) / denom;
    let lo = -eps;
    let hi = T::one() + eps;
    if t >= lo && t <= hi && u >= lo && u <= hi {
        Some((t.max(T::zero()).min(T::one()), u.max(T::zero()).min(T::one())))
    } else {
        None
    }
}

/// Trajectory as a polygonal line.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline2<T> {
    pub id: String,
    pub vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polyline2<T> {
    pub fn new(id: impl Into<String>, vertices: Vec<Point2<T>>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::ShortPolyline);
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::RepeatedVertex);
        }
        Ok(Self { id: id.into(), vertices })
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2<T>> + '_ {
        self.vertices.windows(2).map(|w| Segment2 { p: w[0], q: w[1] })
    }

    pub fn translate(&self, v: Point2<T>) -> Self {
        Self { id: self.id.clone(), vertices: self.vertices.iter().map(|&p| p + v).collect() }
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Scalar> Rect<T> {
    pub fn new(min: Point2<T>, max: Point2<T>) -> Self {
        Self { min, max }
    }

    pub fn empty() -> Self {
        Self {
            min: Point2::new(T::infinity(), T::infinity()),
            max: Point2::new(T::neg_infinity(), T::neg_infinity()),
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.min.x <= self.max.x && self.min.y <= self.max.y)
    }

    pub fn include(&mut self, p: Point2<T>) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut r = *self;
        if !o.is_empty() {
            r.include(o.min);
            r.include(o.max);
        }
        r
    }

    pub fn expand(&self, m: T) -> Self {
        Self {
            min: Point2::new(self.min.x - m, self.min.y - m),
            max: Point2::new(self.max.x + m, self.max.y + m),
        }
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point2<T> {
        self.min.midpoint(self.max)
    }

    /// Corners in counterclockwise order starting bottom-left.
    pub fn corners(&self) -> [Point2<T>; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    /// Parameter interval of the line `o + t·d` inside the rectangle.
    pub fn clip_line(&self, o: Point2<T>, d: Point2<T>) -> Option<(T, T)> {
        let mut lo = T::neg_infinity();
        let mut hi = T::infinity();
        for (oc, dc, mn, mx) in [(o.x, d.x, self.min.x, self.max.x), (o.y, d.y, self.min.y, self.max.y)] {
            if dc == T::zero() {
                if oc < mn || oc > mx {
                    return None;
                }
            } else {
                let a = (mn - oc) / dc;
                let b = (mx - oc) / dc;
                lo = lo.max(a.min(b));
                hi = hi.min(a.max(b));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Twice the signed area of a closed polygon.
pub fn polygon_area2<T: Scalar>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    (0..n).fold(T::zero(), |acc, i| acc + pts[i].cross(pts[(i + 1) % n]))
}

/// Strictly convex or with collinear runs, counterclockwise.
pub fn is_convex_ccw<T: Scalar>(pts: &[Point2<T>], eps: T) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let scale = pts.iter().fold(T::one(), |m, p| m.max(p.max_abs()));
    let turns_ok = (0..n).all(|i| {
        let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        let cr = signed_area2(a, b, c);
        let tol = eps * scale * scale;
        cr > tol || (cr >= -tol && (b - a).dot(c - b) > T::zero())
    });
    turns_ok && polygon_area2(pts) > T::zero()
}

/// Even-odd point in polygon test.
pub fn point_in_polygon<T: Scalar>(pts: &[Point2<T>], p: Point2<T>) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the boundary of a closed polygon.
pub fn dist_to_polygon_boundary<T: Scalar>(pts: &[Point2<T>], p: Point2<T>) -> T {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            if a == b {
                a.dist(p)
            } else {
                Segment2 { p: a, q: b }.dist_to(p)
            }
        })
        .fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2<f64>;
    const TOL: ToleranceConfig = ToleranceConfig { eps_geom: 1e-9, eps_verify: 1e-6, exact_fallback: true };

    #[test]
    fn orientation_examples() {
        let o = P::new(0.0, 0.0);
        assert_eq!(orientation(o, P::new(1.0, 0.0), P::new(0.0, 1.0), &TOL), Orientation::Left);
        assert_eq!(orientation(o, P::new(1.0, 0.0), P::new(2.0, 0.0), &TOL), Orientation::Collinear);
        assert_eq!(orientation(o, P::new(0.0, 1.0), P::new(1.0, 0.0), &TOL), Orientation::Right);
    }

    #[test]
    fn orientation_works_in_f32() {
        let o = Point2::<f32>::new(0.0, 0.0);
        assert_eq!(orientation(o, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), &TOL), Orientation::Left);
    }

    #[test]
    fn exact_fallback_resolves_tiny_determinants() {
        let p = P::new(0.0, 0.0);
        let q = P::new(1.0, 1.0);
        let r = P::new(0.5, 0.5 + 1e-17);
        // 0.5 + 1e-17 rounds to 0.5, so the triple is exactly collinear
        assert_eq!(orientation_robust(p, q, r, &TOL), Orientation::Collinear);
        let r = P::new(0.5, 0.5 + f64::EPSILON);
        assert_eq!(orientation_robust(p, q, r, &TOL), Orientation::Left);
        assert_eq!(orientation(p, q, r, &TOL), Orientation::Collinear);
    }

    #[test]
    fn line_intersection_examples() {
        let x0 = Line2::vertical(0.0);
        let y0 = Line2::slope_intercept(0.0, 0.0);
        match intersect_lines(&x0, &y0, &TOL).unwrap() {
            LineIntersection::Point(p) => assert!(p.dist(P::origin()) < 1e-12),
            _ => panic!(),
        }
        let a = Line2::slope_intercept(1.0, 0.0);
        let b = Line2::slope_intercept(1.0, 1.0);
        assert_eq!(intersect_lines(&a, &b, &TOL).unwrap(), LineIntersection::Parallel);
        let a = Line2::slope_intercept(2.0, 0.0);
        let b = Line2::slope_intercept(-2.0, 4.0);
        match intersect_lines(&a, &b, &TOL).unwrap() {
            LineIntersection::Point(p) => assert!(p.dist(P::new(1.0, 2.0)) < 1e-12),
            _ => panic!(),
        }
        assert_eq!(intersect_lines(&a, &a, &TOL), Err(GeomError::Coincident));
    }

    #[test]
    fn canonical_form_is_unique() {
        let l1 = Line2::through(P::new(0.0, 1.0), P::new(2.0, 3.0)).unwrap();
        let l2 = Line2::through(P::new(5.0, 6.0), P::new(-1.0, 0.0)).unwrap();
        assert!(l1.same_as(&l2, 1e-12));
        assert!(l1.a > 0.0 || (l1.a == 0.0 && l1.b > 0.0));
        assert!((l1.a * l1.a + l1.b * l1.b - 1.0).abs() < 1e-15);
        assert_eq!(Line2::through(P::new(1.0, 1.0), P::new(1.0, 1.0)), Err(GeomError::DegenerateLine));
    }

    #[test]
    fn polyline_rejects_repeats() {
        assert!(Polyline2::new("a", vec![P::new(0.0, 0.0)]).is_err());
        assert!(Polyline2::new("a", vec![P::new(0.0, 0.0), P::new(0.0, 0.0)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn orientation_antisymmetric(px in -10.0..10.0f64, py in -10.0..10.0f64,
                                     qx in -10.0..10.0f64, qy in -10.0..10.0f64,
                                     rx in -10.0..10.0f64, ry in -10.0..10.0f64) {
            let (p, q, r) = (P::new(px, py), P::new(qx, qy), P::new(rx, ry));
            let a = orientation(p, q, r, &TOL);
            let b = orientation(p, r, q, &TOL);
            match a {
                Orientation::Left => proptest::prop_assert_eq!(b, Orientation::Right),
                Orientation::Right => proptest::prop_assert_eq!(b, Orientation::Left),
                Orientation::Collinear => proptest::prop_assert_eq!(b, Orientation::Collinear),
            }
        }
    }
}
