//! Polyline paths in a plane with finitely many punctures.
//!
//! The homotopy invariant of a path is its angle lift: the continuous angle
//! swept around each puncture. For one puncture the lift together with the
//! endpoints classifies paths up to homotopy; with several punctures only
//! the abelianized vector of lifts is tracked.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Endpoints closer than this are treated as the same point.
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// Tolerance on swept angles when comparing homotopy classes. Classes with
/// equal endpoints differ by multiples of 2π, so anything well below π works.
pub const SWEPT_TOL: f64 = 1e-6;

/// Largest allowed `|lift/2π − round(lift/2π)|` for a closed loop.
pub const WINDING_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Signed angle subtended at `center` by the segment `p → q`, in (−π, π].
#[inline]
pub fn signed_angle(center: Point, p: Point, q: Point) -> f64 {
    let (u, v) = (p - center, q - center);
    u.cross(v).atan2(u.dot(v))
}

/// Distance from `c` to the closed segment `p → q`.
pub fn segment_distance(c: Point, p: Point, q: Point) -> f64 {
    let d = q - p;
    let len2 = d.dot(d);
    let t = if len2 > 0.0 {
        ((c - p).dot(d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p + d * t).dist(c)
}

/// The plane with a finite set of excluded points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct PuncturedPlane {
    punctures: Vec<Point>,
    clearance: f64,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    punctures: Vec<Point>,
    clearance: f64,
}

impl TryFrom<SpaceRepr> for PuncturedPlane {
    type Error = Error;
    fn try_from(r: SpaceRepr) -> Result<Self> {
        PuncturedPlane::new(r.punctures, r.clearance)
    }
}

impl From<PuncturedPlane> for SpaceRepr {
    fn from(s: PuncturedPlane) -> Self {
        SpaceRepr {
            punctures: s.punctures,
            clearance: s.clearance,
        }
    }
}

impl PuncturedPlane {
    pub fn new(punctures: Vec<Point>, clearance: f64) -> Result<Self> {
        if !(clearance > 0.0 && clearance.is_finite()) {
            return Err(Error::InvalidSpace(format!(
                "clearance must be positive, got {clearance}"
            )));
        }
        for (i, p) in punctures.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidSpace(format!("puncture {i} is not finite")));
            }
            if punctures[..i].contains(p) {
                return Err(Error::InvalidSpace(format!("puncture {i} duplicates an earlier one")));
            }
        }
        Ok(Self { punctures, clearance })
    }

    /// `ℝ² \ {0}` with the given clearance.
    pub fn origin(clearance: f64) -> Result<Self> {
        Self::new(vec![Point::ORIGIN], clearance)
    }

    pub fn punctures(&self) -> &[Point] {
        &self.punctures
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    /// The unique puncture, for operations defined only on `ℝ² \ {p}`.
    pub fn single_puncture(&self) -> Result<Point> {
        match self.punctures.as_slice() {
            [p] => Ok(*p),
            other => Err(Error::PunctureCount {
                required: "exactly one".into(),
                actual: other.len(),
            }),
        }
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        for (k, &c) in self.punctures.iter().enumerate() {
            let d = p.dist(c);
            if d < self.clearance {
                return Err(Error::ClearanceViolation {
                    segment: 0,
                    puncture: k,
                    distance: d,
                    clearance: self.clearance,
                });
            }
        }
        Ok(())
    }

    /// Angle swept around puncture `k`. The sum of per-segment signed angles
    /// is unambiguous because clearance keeps every segment off the puncture.
    pub fn angle_lift(&self, path: &Polyline, k: usize) -> Result<f64> {
        let c = *self
            .punctures
            .get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("puncture index {k} out of range")))?;
        let mut angles = Vec::with_capacity(path.vertices.len() - 1);
        for (i, w) in path.vertices.windows(2).enumerate() {
            let d = segment_distance(c, w[0], w[1]);
            if d < self.clearance {
                return Err(Error::ClearanceViolation {
                    segment: i,
                    puncture: k,
                    distance: d,
                    clearance: self.clearance,
                });
            }
            angles.push(signed_angle(c, w[0], w[1]));
        }
        Ok(exact_sum(&angles))
    }

    /// Angle lifts around every puncture.
    pub fn lifts(&self, path: &Polyline) -> Result<Vec<f64>> {
        (0..self.punctures.len()).map(|k| self.angle_lift(path, k)).collect()
    }

    pub fn winding_number(&self, path: &Polyline) -> Result<Vec<i64>> {
        let gap = path.source().dist(path.target());
        if gap > COINCIDENCE_TOL {
            return Err(Error::NotClosed { gap });
        }
        self.lifts(path)?.into_iter().map(winding_from_lift).collect()
    }

    pub fn homotopy_class(&self, path: &Polyline) -> Result<HomotopyClass> {
        Ok(HomotopyClass {
            source: path.source(),
            target: path.target(),
            swept: self.lifts(path)?,
        })
    }

    pub fn homotopic(&self, p: &Polyline, q: &Polyline) -> Result<bool> {
        let (cp, cq) = (self.homotopy_class(p)?, self.homotopy_class(q)?);
        Ok(cp.same_class(&cq))
    }

    /// Point inversion `x ↦ −x` of every vertex, checked against this space.
    pub fn invert_point(&self, path: &Polyline) -> Result<Polyline> {
        let inverted = path.negated();
        self.lifts(&inverted)?;
        Ok(inverted)
    }
}

/// Rounds a closed-loop lift to turns, rejecting non-integral residuals.
pub fn winding_from_lift(lift: f64) -> Result<i64> {
    let turns = lift / TAU;
    let n = turns.round();
    let residual = (turns - n).abs();
    if residual >= WINDING_RESIDUAL_TOL {
        return Err(Error::NonIntegralWinding { residual });
    }
    Ok(n as i64)
}

/// A concrete path: at least two vertices, consecutive vertices distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(format!(
                "need at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidPolyline(format!("vertex {i} is not finite")));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolyline(format!("vertices {i} and {} coincide", i + 1)));
        }
        Ok(Self { vertices })
    }

    /// Samples the circular arc of radius `r` about `center` from angle
    /// `start` through `sweep` radians (positive is counter-clockwise).
    pub fn arc(center: Point, r: f64, start: f64, sweep: f64, segments: usize) -> Result<Self> {
        let segments = segments.max(1);
        let vertices = (0..=segments)
            .map(|j| center + Point::polar(r, start + sweep * j as f64 / segments as f64))
            .collect();
        Self::new(vertices)
    }

    /// Closed polygon through `corners`, returning to the first one.
    pub fn closed(corners: &[Point]) -> Result<Self> {
        let mut v = corners.to_vec();
        if let Some(&first) = corners.first() {
            v.push(first);
        }
        Self::new(v)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn source(&self) -> Point {
        self.vertices[0]
    }

    pub fn target(&self) -> Point {
        *self.vertices.last().expect("non-empty")
    }

    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.source().dist(self.target()) <= COINCIDENCE_TOL
    }

    /// `self` followed by `next`; the shared endpoint appears once.
    pub fn concat(&self, next: &Polyline) -> Result<Polyline> {
        let gap = self.target().dist(next.source());
        if gap > COINCIDENCE_TOL {
            return Err(Error::EndpointMismatch { gap });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&next.vertices[1..]);
        // A join within tolerance but not exact may leave a zero-length step.
        vertices.dedup();
        Polyline::new(vertices)
    }

    pub fn reverse(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline { vertices }
    }

    pub fn negated(&self) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|&p| -p).collect(),
        }
    }
}

/// A homotopy class recorded by its endpoints and per-puncture swept angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyClass {
    pub source: Point,
    pub target: Point,
    pub swept: Vec<f64>,
}

impl HomotopyClass {
    /// The class of the constant path at `at`.
    pub fn identity(at: Point, punctures: usize) -> Self {
        Self {
            source: at,
            target: at,
            swept: vec![0.0; punctures],
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source.dist(self.target) <= COINCIDENCE_TOL
    }

    pub fn same_class(&self, other: &Self) -> bool {
        self.source.dist(other.source) <= COINCIDENCE_TOL
            && self.target.dist(other.target) <= COINCIDENCE_TOL
            && self.swept.len() == other.swept.len()
            && self
                .swept
                .iter()
                .zip(&other.swept)
                .all(|(a, b)| (a - b).abs() <= SWEPT_TOL)
    }

    /// Groupoid composition of classes: `self` then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        let gap = self.target.dist(next.source);
        if gap > COINCIDENCE_TOL {
            return Err(Error::EndpointMismatch { gap });
        }
        if self.swept.len() != next.swept.len() {
            return Err(Error::InvalidArgument("classes from different spaces".into()));
        }
        Ok(Self {
            source: self.source,
            target: next.target,
            swept: self.swept.iter().zip(&next.swept).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            source: self.target,
            target: self.source,
            swept: self.swept.iter().map(|s| -s).collect(),
        }
    }

    /// Winding numbers of a loop class.
    pub fn windings(&self) -> Result<Vec<i64>> {
        let gap = self.source.dist(self.target);
        if gap > COINCIDENCE_TOL {
            return Err(Error::NotClosed { gap });
        }
        self.swept.iter().map(|&s| winding_from_lift(s)).collect()
    }
}

/// Counter-clockwise half circle of radius `r` about the origin starting at angle `omega`.
pub fn half_circle(r: f64, omega: f64, segments: usize) -> Result<Polyline> {
    Polyline::arc(Point::ORIGIN, r, omega, PI, segments)
}

/// Correctly rounded sum of `xs`, independent of order (Shewchuk partials
/// with a final half-even fix-up).
pub(crate) fn exact_sum(xs: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for &x in xs {
        let mut x = x;
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }
    let Some(mut hi) = partials.pop() else {
        return 0.0;
    };
    let mut lo = 0.0;
    while let Some(y) = partials.pop() {
        let x = hi;
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if let Some(&next) = partials.last() {
        if (lo < 0.0 && next < 0.0) || (lo > 0.0 && next > 0.0) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
    }
    hi
}
