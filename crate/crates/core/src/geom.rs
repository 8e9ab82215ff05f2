//! Ruler-and-compass primitives: lines through points, circles, the three
//! intersection cases, and rigid motions used to assemble clusters.
//!
//! A line is stored in normal form `{p : p·(cos θ, sin θ) = c}` with
//! `θ ∈ [0, π)`. Tolerance `eps` separates tangent from empty and from
//! transversal configurations; it is an explicit argument everywhere and
//! defaults to [`EPS`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default geometric tolerance.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("lines are parallel")]
    Parallel,
    #[error("loci do not intersect")]
    EmptyIntersection,
    #[error("circles coincide")]
    Coincident,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("segment lengths differ: {0} vs {1}")]
    LengthMismatch(f64, f64),
    #[error("bad value: {0}")]
    BadValue(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn unit(angle: f64) -> Point2 {
        Point2::new(angle.cos(), angle.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        Point2::new(self * p.x, self * p.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineRep {
    pub theta: f64,
    pub c: f64,
}

impl LineRep {
    /// Build a line from any normal angle, folding it into `[0, π)`.
    pub fn new(theta: f64, c: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut c = c;
        if t >= PI {
            t -= PI;
            c = -c;
        }
        // rem_euclid can land on 2π - tiny; fold values that round up to π.
        if t >= PI {
            t = 0.0;
            c = -c;
        }
        LineRep { theta: t, c }
    }

    pub fn normal(&self) -> Point2 {
        Point2::unit(self.theta)
    }

    pub fn direction(&self) -> Point2 {
        self.normal().perp()
    }

    /// Signed distance from `p` to the line, positive on the normal side.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.normal().dot(p) - self.c
    }

    /// The parallel line displaced by `d` along the normal.
    pub fn offset(&self, d: f64) -> LineRep {
        LineRep {
            theta: self.theta,
            c: self.c + d,
        }
    }

    pub fn foot(&self, p: Point2) -> Point2 {
        p - self.signed_distance(p) * self.normal()
    }

    /// Whether two representations describe the same line within `tol`.
    pub fn approx_eq(&self, o: &LineRep, tol: f64) -> bool {
        let dt = (self.theta - o.theta).abs();
        (dt <= tol && (self.c - o.c).abs() <= tol)
            || ((PI - dt).abs() <= tol && (self.c + o.c).abs() <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleRep {
    pub center: Point2,
    pub r: f64,
}

impl CircleRep {
    pub fn new(center: Point2, r: f64) -> Self {
        CircleRep { center, r }
    }
}

/// Result of intersecting two loci that meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    /// Tangent loci: one root, flagged degenerate.
    Tangent(Point2),
    Two(Point2, Point2),
}

impl Intersection {
    pub fn points(&self) -> Vec<Point2> {
        match *self {
            Intersection::Tangent(p) => vec![p],
            Intersection::Two(p, q) => vec![p, q],
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Intersection::Tangent(_))
    }
}

/// Unsigned angle between two lines, folded into `[0, π/2]`.
pub fn line_angle(l1: &LineRep, l2: &LineRep) -> f64 {
    let d = (l1.theta - l2.theta).abs();
    d.min(PI - d)
}

/// Fold a constraint angle in (0, π) to the unsigned line-angle convention.
pub fn fold_angle(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(PI);
    a.min(PI - a)
}

pub fn intersect_line_line(l1: &LineRep, l2: &LineRep, eps: f64) -> Result<Point2, GeomError> {
    let det = (l2.theta - l1.theta).sin();
    if det.abs() <= eps {
        return Err(GeomError::Parallel);
    }
    let (s1, c1) = l1.theta.sin_cos();
    let (s2, c2) = l2.theta.sin_cos();
    // Cramer's rule on [c1 s1; c2 s2] p = [l1.c; l2.c]; c1*s2 - s1*c2 = det.
    Ok(Point2::new(
        (l1.c * s2 - s1 * l2.c) / det,
        (c1 * l2.c - l1.c * c2) / det,
    ))
}

pub fn intersect_line_circle(
    l: &LineRep,
    k: &CircleRep,
    eps: f64,
) -> Result<Intersection, GeomError> {
    let s = l.signed_distance(k.center);
    let foot = k.center - s * l.normal();
    if (s.abs() - k.r).abs() <= eps {
        return Ok(Intersection::Tangent(foot));
    }
    if s.abs() > k.r {
        return Err(GeomError::EmptyIntersection);
    }
    let h = (k.r * k.r - s * s).sqrt();
    let t = l.direction();
    Ok(Intersection::Two(foot + h * t, foot - h * t))
}

pub fn intersect_circle_circle(
    k1: &CircleRep,
    k2: &CircleRep,
    eps: f64,
) -> Result<Intersection, GeomError> {
    let delta = k2.center - k1.center;
    let d = delta.norm();
    if d <= eps {
        return Err(if (k1.r - k2.r).abs() <= eps {
            GeomError::Coincident
        } else {
            GeomError::EmptyIntersection
        });
    }
    let u = (1.0 / d) * delta;
    let outer = k1.r + k2.r;
    let inner = (k1.r - k2.r).abs();
    if (d - outer).abs() <= eps {
        return Ok(Intersection::Tangent(k1.center + k1.r * u));
    }
    if (d - inner).abs() <= eps {
        let side = if k1.r >= k2.r { 1.0 } else { -1.0 };
        return Ok(Intersection::Tangent(k1.center + (side * k1.r) * u));
    }
    if d > outer || d < inner {
        return Err(GeomError::EmptyIntersection);
    }
    let a = (d * d + k1.r * k1.r - k2.r * k2.r) / (2.0 * d);
    let h = (k1.r * k1.r - a * a).max(0.0).sqrt();
    let mid = k1.center + a * u;
    let n = u.perp();
    Ok(Intersection::Two(mid + h * n, mid - h * n))
}

pub fn line_through_points(p: Point2, q: Point2, eps: f64) -> Result<LineRep, GeomError> {
    let d = q - p;
    let len = d.norm();
    if len <= eps {
        return Err(GeomError::CoincidentPoints);
    }
    let n = (1.0 / len) * d.perp();
    let theta = n.y.atan2(n.x);
    Ok(LineRep::new(theta, n.dot(p)))
}

/// The line through `p` making angle `alpha` with `reference`; `branch`
/// picks the normal angle `θ_ref + alpha` (0) or `θ_ref − alpha` (1).
pub fn line_through_point_angle(
    p: Point2,
    reference: &LineRep,
    alpha: f64,
    branch: u8,
) -> Result<LineRep, GeomError> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(GeomError::BadValue(format!(
            "angle must lie in (0, pi), got {alpha}"
        )));
    }
    let theta = match branch {
        0 => reference.theta + alpha,
        1 => reference.theta - alpha,
        b => {
            return Err(GeomError::BadValue(format!(
                "branch must be 0 or 1, got {b}"
            )))
        }
    };
    Ok(LineRep::new(theta, Point2::unit(theta).dot(p)))
}

/// Tangent lines from `p` to `k`, built from the circle on diameter `p`–centre.
pub fn tangents_from_point(
    p: Point2,
    k: &CircleRep,
    eps: f64,
) -> Result<Vec<(LineRep, bool)>, GeomError> {
    let d = p.dist(k.center);
    if (d - k.r).abs() <= eps {
        // p on the circle: the single tangent is perpendicular to the radius.
        let n = (1.0 / d) * (p - k.center);
        let theta = n.y.atan2(n.x);
        return Ok(vec![(LineRep::new(theta, n.dot(p)), true)]);
    }
    if d < k.r {
        return Err(GeomError::EmptyIntersection);
    }
    let mid = 0.5 * (p + k.center);
    let thales = CircleRep::new(mid, 0.5 * d);
    let touch = intersect_circle_circle(&thales, k, eps)?;
    touch
        .points()
        .into_iter()
        .map(|t| line_through_points(p, t, eps).map(|l| (l, touch.is_degenerate())))
        .collect()
}

/// Orientation-aware rigid motion: optional reflection across the x-axis,
/// then rotation by `angle`, then translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Motion {
    pub angle: f64,
    pub translation: Point2,
    pub reflect: bool,
}

impl Motion {
    pub const IDENTITY: Motion = Motion {
        angle: 0.0,
        translation: Point2::ORIGIN,
        reflect: false,
    };

    pub fn apply_point(&self, p: Point2) -> Point2 {
        let q = if self.reflect {
            Point2::new(p.x, -p.y)
        } else {
            p
        };
        let (s, c) = self.angle.sin_cos();
        Point2::new(c * q.x - s * q.y, s * q.x + c * q.y) + self.translation
    }

    pub fn apply_line(&self, l: &LineRep) -> LineRep {
        let theta = if self.reflect { -l.theta } else { l.theta } + self.angle;
        let n = Point2::unit(theta);
        LineRep::new(theta, l.c + n.dot(self.translation))
    }

    pub fn apply_circle(&self, k: &CircleRep) -> CircleRep {
        CircleRep::new(self.apply_point(k.center), k.r)
    }

    pub fn apply(&self, p: &Placement) -> Placement {
        match p {
            Placement::Point(q) => Placement::Point(self.apply_point(*q)),
            Placement::Line(l) => Placement::Line(self.apply_line(l)),
            Placement::Circle(k) => Placement::Circle(self.apply_circle(k)),
        }
    }
}

/// Position of one entity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Point(Point2),
    Line(LineRep),
    Circle(CircleRep),
}

impl Placement {
    pub fn as_point(&self) -> Option<Point2> {
        match *self {
            Placement::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_line(&self) -> Option<LineRep> {
        match *self {
            Placement::Line(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<CircleRep> {
        match *self {
            Placement::Circle(k) => Some(k),
            _ => None,
        }
    }

    /// Whether two placements coincide within `tol`.
    pub fn approx_eq(&self, o: &Placement, tol: f64) -> bool {
        match (self, o) {
            (Placement::Point(p), Placement::Point(q)) => p.dist(*q) <= tol,
            (Placement::Line(l), Placement::Line(m)) => l.approx_eq(m, tol),
            (Placement::Circle(k), Placement::Circle(j)) => {
                k.center.dist(j.center) <= tol && (k.r - j.r).abs() <= tol
            }
            _ => false,
        }
    }
}

/// The motion taking `src.0 → dst.0` and `src.1 → dst.1`.
pub fn rigid_align(
    src: (Point2, Point2),
    dst: (Point2, Point2),
    reflect: bool,
) -> Result<Motion, GeomError> {
    let ds = src.1 - src.0;
    let dd = dst.1 - dst.0;
    let (ls, ld) = (ds.norm(), dd.norm());
    if ls <= EPS || ld <= EPS {
        return Err(GeomError::CoincidentPoints);
    }
    if (ls - ld).abs() > 1e-9 * ld.max(1.0) {
        return Err(GeomError::LengthMismatch(ls, ld));
    }
    let ds = if reflect {
        Point2::new(ds.x, -ds.y)
    } else {
        ds
    };
    let angle = dd.y.atan2(dd.x) - ds.y.atan2(ds.x);
    let partial = Motion {
        angle,
        translation: Point2::ORIGIN,
        reflect,
    };
    let translation = dst.0 - partial.apply_point(src.0);
    Ok(Motion {
        angle,
        translation,
        reflect,
    })
}

/// Apply `m` to every placement of a solution fragment.
pub fn apply_motion<K: Clone + Ord>(
    m: &Motion,
    fragment: &std::collections::BTreeMap<K, Placement>,
) -> std::collections::BTreeMap<K, Placement> {
    fragment
        .iter()
        .map(|(k, p)| (k.clone(), m.apply(p)))
        .collect()
}
