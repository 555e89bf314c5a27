//! One-dimensional representations of the fundamental groupoid of a
//! punctured plane.
//!
//! A representation is assembled from a base point, a mesh (a path from the
//! base point to every point), a unit phase for each mesh path, and a
//! representation of the fundamental group `n ↦ e^{iφn}` per puncture. A
//! path `q` from `a` to `b` is evaluated by closing it into a loop through
//! the mesh:
//!
//! ```text
//! χ(q) = w(a)⁻¹ · D(winding of mesh(a)·q·mesh(b)⁻¹) · w(b)
//! ```
//!
//! Changing the mesh weights `w` changes χ on open paths by a factor that
//! depends only on the endpoints, so every choice describes the same physics.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{
    half_circle, signed_angle, winding_from_lift, HomotopyClass, Point, Polyline, PuncturedPlane, COINCIDENCE_TOL,
};

/// Absolute tolerance for comparing phases.
pub const PHASE_TOL: f64 = 1e-9;

/// Minimum number of segments in a sampled spiral mesh path.
pub const MIN_SPIRAL_SEGMENTS: usize = 16;

pub const HALF_CIRCLE_SEGMENTS: usize = 64;

/// The representation `n ↦ e^{iφn}` of the integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupRepZ {
    pub phi: f64,
}

impl GroupRepZ {
    pub fn new(phi: f64) -> Self {
        Self { phi }
    }

    pub fn value(&self, n: i64) -> Complex64 {
        Complex64::from_polar(1.0, self.phi * n as f64)
    }
}

/// Complex polar coordinates relative to a center, normalized so the base
/// point sits at `1·e^{i0}`. Angles are taken in `[0, 2π)`, which puts a cut
/// along the ray from the center through the base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarFrame {
    pub center: Point,
    pub base: Point,
}

impl PolarFrame {
    /// Center at the origin, base point `(1, 0)`.
    pub const STANDARD: PolarFrame = PolarFrame {
        center: Point::ORIGIN,
        base: Point::new(1.0, 0.0),
    };

    pub fn new(center: Point, base: Point) -> Result<Self> {
        if center.dist(base) <= COINCIDENCE_TOL {
            return Err(Error::InvalidArgument(
                "frame base point coincides with its center".into(),
            ));
        }
        Ok(Self { center, base })
    }

    fn unit(&self) -> Complex64 {
        let d = self.base - self.center;
        Complex64::new(d.x, d.y)
    }

    /// `(r, θ)` with `a = center + (base − center)·r·e^{iθ}` and `0 ≤ θ < 2π`.
    pub fn polar(&self, a: Point) -> (f64, f64) {
        let d = a - self.center;
        let z = Complex64::new(d.x, d.y) / self.unit();
        let mut theta = z.im.atan2(z.re);
        if theta < 0.0 {
            theta += TAU;
        }
        if theta >= TAU {
            theta = 0.0;
        }
        (z.norm(), theta)
    }

    pub fn point(&self, r: f64, theta: f64) -> Point {
        let z = self.unit() * Complex64::from_polar(r, theta);
        self.center + Point::new(z.re, z.im)
    }
}

/// Samples the spiral `t ↦ r^t e^{itθ}` (in `frame` coordinates) from the
/// base point to `a` with `segments` chords. The last vertex is exactly `a`.
///
/// Returns `None` when `a` is the base point.
pub fn spiral_path(frame: &PolarFrame, a: Point, segments: usize) -> Result<Option<Polyline>> {
    if a.dist(frame.base) <= COINCIDENCE_TOL {
        return Ok(None);
    }
    let (r, theta) = frame.polar(a);
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument("spiral target at the frame center".into()));
    }
    let m = segments.max(MIN_SPIRAL_SEGMENTS);
    let mut vertices: Vec<Point> = (0..m)
        .map(|j| {
            let t = j as f64 / m as f64;
            frame.point(r.powf(t), t * theta)
        })
        .collect();
    vertices.push(a);
    vertices.dedup();
    if vertices.len() < 2 {
        return Ok(None);
    }
    Polyline::new(vertices).map(Some)
}

/// Angle swept around `center` by a path, without clearance checks.
fn raw_lift(center: Point, path: &Polyline) -> f64 {
    path.vertices()
        .windows(2)
        .map(|w| signed_angle(center, w[0], w[1]))
        .sum()
}

/// How a mesh connects the base point to a point.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshKind {
    /// `t ↦ r^t e^{itθ}` in the frame's polar coordinates; valid everywhere off the center.
    Spiral,
    /// The straight segment from the base point; fails where the segment meets a puncture.
    Straight,
    /// Explicit paths, looked up by their target.
    Table(Vec<Polyline>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    frame: PolarFrame,
    kind: MeshKind,
    segments: usize,
}

impl Mesh {
    pub fn spiral(frame: PolarFrame) -> Self {
        Self {
            frame,
            kind: MeshKind::Spiral,
            segments: 64,
        }
    }

    pub fn straight(frame: PolarFrame) -> Self {
        Self {
            frame,
            kind: MeshKind::Straight,
            segments: 1,
        }
    }

    pub fn table(frame: PolarFrame, paths: Vec<Polyline>) -> Result<Self> {
        for p in &paths {
            let gap = p.source().dist(frame.base);
            if gap > COINCIDENCE_TOL {
                return Err(Error::EndpointMismatch { gap });
            }
        }
        Ok(Self {
            frame,
            kind: MeshKind::Table(paths),
            segments: 1,
        })
    }

    /// Initial number of chords for sampled spiral paths (at least 16).
    pub fn with_segments(mut self, segments: usize) -> Self {
        self.segments = segments.max(MIN_SPIRAL_SEGMENTS);
        self
    }

    pub fn basepoint(&self) -> Point {
        self.frame.base
    }

    pub fn frame(&self) -> &PolarFrame {
        &self.frame
    }

    pub fn kind(&self) -> &MeshKind {
        &self.kind
    }

    /// The mesh path from the base point to `a`; `None` stands for the
    /// constant path at the base point.
    pub fn path_to(&self, a: Point) -> Result<Option<Polyline>> {
        if a.dist(self.frame.base) <= COINCIDENCE_TOL {
            return Ok(None);
        }
        match &self.kind {
            MeshKind::Spiral => {
                let (_, theta) = self.frame.polar(a);
                let mut m = self.segments;
                loop {
                    let path = spiral_path(&self.frame, a, m)?;
                    let Some(path) = path else { return Ok(None) };
                    let lift = raw_lift(self.frame.center, &path);
                    if (lift - theta).abs() <= PHASE_TOL || m >= 1 << 16 {
                        return Ok(Some(path));
                    }
                    m *= 2;
                }
            }
            MeshKind::Straight => Polyline::new(vec![self.frame.base, a]).map(Some),
            MeshKind::Table(paths) => paths
                .iter()
                .find(|p| p.target().dist(a) <= COINCIDENCE_TOL)
                .cloned()
                .map(Some)
                .ok_or(Error::MeshUndefined { x: a.x, y: a.y }),
        }
    }

    /// Per-puncture angle lifts of the mesh path to `a`.
    pub fn lifts_to(&self, space: &PuncturedPlane, a: Point) -> Result<Vec<f64>> {
        match self.path_to(a)? {
            Some(path) => space.lifts(&path),
            None => Ok(vec![0.0; space.punctures().len()]),
        }
    }
}

/// One term `amplitude · sin(k·x + phase)` of a smooth phase field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub kx: f64,
    pub ky: f64,
    pub amplitude: f64,
    pub phase: f64,
}

type PhaseFn = dyn Fn(Point) -> Result<f64> + Send + Sync;

/// Unit phases attached to the mesh paths, stored as real phase angles so
/// that unit modulus holds by construction.
#[derive(Clone)]
pub enum MeshWeights {
    /// Every mesh path has weight 1.
    Unity,
    /// `e^{iφθ/2π}`, with `θ ∈ [0, 2π)` measured in `frame`.
    Symmetric {
        phi: f64,
        frame: PolarFrame,
    },
    /// Explicit phases at listed points.
    Table(Vec<(Point, f64)>),
    /// A smooth phase field, shifted so the base point gets phase zero.
    Harmonic {
        terms: Vec<HarmonicTerm>,
        offset: f64,
    },
    Custom(Arc<PhaseFn>),
}

impl fmt::Debug for MeshWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unity => write!(f, "Unity"),
            Self::Symmetric { phi, frame } => f
                .debug_struct("Symmetric")
                .field("phi", phi)
                .field("frame", frame)
                .finish(),
            Self::Table(t) => f.debug_tuple("Table").field(&t.len()).finish(),
            Self::Harmonic { terms, offset } => f
                .debug_struct("Harmonic")
                .field("terms", &terms.len())
                .field("offset", offset)
                .finish(),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl MeshWeights {
    pub fn symmetric(phi: f64, frame: PolarFrame) -> Self {
        Self::Symmetric { phi, frame }
    }

    pub fn harmonic(terms: Vec<HarmonicTerm>, basepoint: Point) -> Self {
        let offset = harmonic_sum(&terms, basepoint);
        Self::Harmonic { terms, offset }
    }

    pub fn custom(f: impl Fn(Point) -> Result<f64> + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn phase_at(&self, a: Point) -> Result<f64> {
        match self {
            Self::Unity => Ok(0.0),
            Self::Symmetric { phi, frame } => Ok(phi * frame.polar(a).1 / TAU),
            Self::Table(entries) => entries
                .iter()
                .find(|(p, _)| p.dist(a) <= COINCIDENCE_TOL)
                .map(|&(_, phase)| phase)
                .ok_or(Error::MeshUndefined { x: a.x, y: a.y }),
            Self::Harmonic { terms, offset } => Ok(harmonic_sum(terms, a) - offset),
            Self::Custom(f) => f(a),
        }
    }

    pub fn weight_at(&self, a: Point) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, self.phase_at(a)?))
    }
}

fn harmonic_sum(terms: &[HarmonicTerm], a: Point) -> f64 {
    terms
        .iter()
        .map(|t| t.amplitude * (t.kx * a.x + t.ky * a.y + t.phase).sin())
        .sum()
}

/// A fundamental-groupoid representation built from a mesh, mesh weights
/// and a fundamental-group representation per puncture.
#[derive(Debug, Clone)]
pub struct GroupoidRep {
    space: PuncturedPlane,
    mesh: Mesh,
    weights: MeshWeights,
    group: Vec<GroupRepZ>,
}

impl GroupoidRep {
    pub fn new(space: PuncturedPlane, mesh: Mesh, weights: MeshWeights, group: Vec<GroupRepZ>) -> Result<Self> {
        if group.len() != space.punctures().len() {
            return Err(Error::InvalidArgument(format!(
                "{} group representations for {} punctures",
                group.len(),
                space.punctures().len()
            )));
        }
        space.check_point(mesh.basepoint())?;
        Ok(Self {
            space,
            mesh,
            weights,
            group,
        })
    }

    /// The Laidlaw–DeWitt choice: all mesh weights equal to 1, so that
    /// `χ(q) = D(g([q]))`.
    pub fn ldw(space: PuncturedPlane, phi: f64, mesh: Mesh) -> Result<Self> {
        let group = vec![GroupRepZ::new(phi); space.punctures().len()];
        Self::new(space, mesh, MeshWeights::Unity, group)
    }

    /// Spiral mesh around the single puncture with weights `e^{iφθ/2π}`.
    /// Every counter-clockwise half circle around the puncture gets `e^{iφ/2}`.
    pub fn symmetric(space: PuncturedPlane, frame: PolarFrame, phi: f64) -> Result<Self> {
        let center = space.single_puncture()?;
        if center != frame.center {
            return Err(Error::InvalidArgument(
                "symmetric frame must be centered on the puncture".into(),
            ));
        }
        Self::new(
            space,
            Mesh::spiral(frame),
            MeshWeights::symmetric(phi, frame),
            vec![GroupRepZ::new(phi)],
        )
    }

    pub fn space(&self) -> &PuncturedPlane {
        &self.space
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn weights(&self) -> &MeshWeights {
        &self.weights
    }

    pub fn group(&self) -> &[GroupRepZ] {
        &self.group
    }

    pub fn basepoint(&self) -> Point {
        self.mesh.basepoint()
    }

    /// Same space, mesh and group representation with new mesh weights.
    pub fn gauge_transform(&self, weights: MeshWeights) -> Self {
        Self {
            weights,
            ..self.clone()
        }
    }

    /// The loop `mesh(a)·q·mesh(b)⁻¹` at the base point.
    pub fn closure(&self, path: &Polyline) -> Result<Polyline> {
        let head = self.mesh.path_to(path.source())?;
        let tail = self.mesh.path_to(path.target())?.map(|p| p.reverse());
        let mut out = match head {
            Some(h) => h.concat(path)?,
            None => path.clone(),
        };
        if let Some(t) = tail {
            out = out.concat(&t)?;
        }
        Ok(out)
    }

    /// Windings of the mesh-closed loop, one per puncture.
    pub fn loop_windings(&self, path: &Polyline) -> Result<Vec<i64>> {
        // Validates the path itself before it is mixed with mesh segments.
        self.space.lifts(path)?;
        self.space.winding_number(&self.closure(path)?)
    }

    /// `g([q])`: the fundamental-group element of the mesh-closed loop.
    pub fn loop_projection(&self, path: &Polyline) -> Result<i64> {
        self.space.single_puncture()?;
        Ok(self.loop_windings(path)?[0])
    }

    fn group_value(&self, windings: &[i64]) -> Complex64 {
        self.group.iter().zip(windings).map(|(d, &n)| d.value(n)).product()
    }

    fn endpoint_factor(&self, a: Point, b: Point) -> Result<Complex64> {
        Ok(self.weights.weight_at(a)?.conj() * self.weights.weight_at(b)?)
    }

    /// `χ(q) = w(a)⁻¹ · D(mesh(a)·q·mesh(b)⁻¹) · w(b)`.
    pub fn chi(&self, path: &Polyline) -> Result<Complex64> {
        let n = self.loop_windings(path)?;
        Ok(self.endpoint_factor(path.source(), path.target())? * self.group_value(&n))
    }

    /// χ evaluated from a recorded class using lift arithmetic instead of an explicit loop.
    pub fn chi_class(&self, class: &HomotopyClass) -> Result<Complex64> {
        let n = self.class_windings(class)?;
        Ok(self.endpoint_factor(class.source, class.target)? * self.group_value(&n))
    }

    /// Windings of the mesh closure of a recorded class.
    pub fn class_windings(&self, class: &HomotopyClass) -> Result<Vec<i64>> {
        if class.swept.len() != self.group.len() {
            return Err(Error::InvalidArgument("class belongs to a different space".into()));
        }
        let la = self.mesh.lifts_to(&self.space, class.source)?;
        let lb = self.mesh.lifts_to(&self.space, class.target)?;
        la.iter()
            .zip(&class.swept)
            .zip(&lb)
            .map(|((a, s), b)| winding_from_lift(a + s - b))
            .collect()
    }

    /// The class from `a` to `b` whose mesh closure has the given windings.
    pub fn class_transport_windings(&self, a: Point, b: Point, n: &[i64]) -> Result<HomotopyClass> {
        if n.len() != self.group.len() {
            return Err(Error::InvalidArgument("one winding per puncture required".into()));
        }
        self.space.check_point(a)?;
        self.space.check_point(b)?;
        let la = self.mesh.lifts_to(&self.space, a)?;
        let lb = self.mesh.lifts_to(&self.space, b)?;
        Ok(HomotopyClass {
            source: a,
            target: b,
            swept: la
                .iter()
                .zip(&lb)
                .zip(n)
                .map(|((la, lb), &n)| lb - la + TAU * n as f64)
                .collect(),
        })
    }

    /// `f_ab(n)` for a single puncture.
    pub fn class_transport(&self, a: Point, b: Point, n: i64) -> Result<HomotopyClass> {
        self.space.single_puncture()?;
        self.class_transport_windings(a, b, &[n])
    }

    /// Per endpoint pair, the ratios `χ₂/χ₁` over `classes_per_pair` classes.
    pub fn compatibility_ratios(
        &self,
        other: &Self,
        endpoints: &[(Point, Point)],
        classes_per_pair: usize,
    ) -> Result<Vec<Vec<Complex64>>> {
        if self.space != other.space {
            return Err(Error::InvalidArgument(
                "representations live on different spaces".into(),
            ));
        }
        let half = (classes_per_pair / 2) as i64;
        endpoints
            .iter()
            .map(|&(a, b)| {
                (0..classes_per_pair as i64)
                    .map(|j| {
                        let n: Vec<i64> = (0..self.group.len() as i64).map(|k| (j - half) * (k + 1)).collect();
                        let class = self.class_transport_windings(a, b, &n)?;
                        Ok(other.chi_class(&class)? / self.chi_class(&class)?)
                    })
                    .collect()
            })
            .collect()
    }

    /// True iff `χ₂/χ₁` depends only on the endpoints for every listed pair.
    pub fn compatible(&self, other: &Self, endpoints: &[(Point, Point)], classes_per_pair: usize) -> Result<bool> {
        let ratios = self.compatibility_ratios(other, endpoints, classes_per_pair)?;
        Ok(ratios.iter().all(|row| match row.first() {
            Some(first) => row.iter().all(|r| (r - first).norm() <= PHASE_TOL),
            None => true,
        }))
    }

    /// The same representation expressed with another mesh: mesh weights
    /// are transported so that χ is unchanged on every path.
    pub fn with_mesh(&self, mesh: Mesh) -> Result<Self> {
        self.space.check_point(mesh.basepoint())?;
        let old = self.clone();
        let new_mesh = mesh.clone();
        let phis: Vec<f64> = self.group.iter().map(|d| d.phi).collect();
        let correction = move |x: Point| -> Result<f64> {
            let l_old = old.mesh.lifts_to(&old.space, x)?;
            let l_new = new_mesh.lifts_to(&old.space, x)?;
            let shift: f64 = phis
                .iter()
                .zip(l_new.iter().zip(&l_old))
                .map(|(phi, (n, o))| phi * (n - o) / TAU)
                .sum();
            Ok(old.weights.phase_at(x)? + shift)
        };
        let base_phase = correction(mesh.basepoint())?;
        let weights = MeshWeights::custom(move |x| Ok(correction(x)? - base_phase));
        Self::new(self.space.clone(), mesh, weights, self.group.clone())
    }

    /// `max |χ(q_ω) − χ(−q_ω)|` over counter-clockwise half circles `q_ω` of
    /// radius `r` starting at angle `ω`, with `−q_ω` the point inversion.
    pub fn inversion_defect(&self, samples: &[(f64, f64)]) -> Result<f64> {
        let center = self.space.single_puncture()?;
        if center != Point::ORIGIN {
            return Err(Error::InvalidArgument(
                "point inversion needs the puncture at the origin".into(),
            ));
        }
        let mut worst: f64 = 0.0;
        for &(r, omega) in samples {
            let q = half_circle(r, omega, HALF_CIRCLE_SEGMENTS)?;
            let mq = self.space.invert_point(&q)?;
            worst = worst.max((self.chi(&q)? - self.chi(&mq)?).norm());
        }
        Ok(worst)
    }

    /// χ of the counter-clockwise half circle about the origin of radius `r` from angle `omega`.
    pub fn half_circle_phase(&self, r: f64, omega: f64) -> Result<Complex64> {
        self.chi(&half_circle(r, omega, HALF_CIRCLE_SEGMENTS)?)
    }
}

/// `e^{iφ/2}`, the phase of every counter-clockwise half circle under the symmetric representation.
pub fn half_phase(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi * PI / TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plane() -> PuncturedPlane {
        PuncturedPlane::origin(0.05).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= PHASE_TOL
    }

    fn ldw(phi: f64) -> GroupoidRep {
        GroupoidRep::ldw(plane(), phi, Mesh::spiral(PolarFrame::STANDARD)).unwrap()
    }

    fn sym(phi: f64) -> GroupoidRep {
        GroupoidRep::symmetric(plane(), PolarFrame::STANDARD, phi).unwrap()
    }

    #[test]
    fn group_rep_is_a_character() {
        let d = GroupRepZ::new(0.7);
        for (m, n) in [(3, -5), (0, 4), (-2, -2)] {
            assert!(close(d.value(m + n), d.value(m) * d.value(n)));
            assert!((d.value(m).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_polar_coordinates() {
        let (r, t) = PolarFrame::STANDARD.polar(Point::new(0.0, 4.0));
        assert!((r - 4.0).abs() < 1e-12 && (t - PI / 2.0).abs() < 1e-12);
        let (_, t) = PolarFrame::STANDARD.polar(Point::new(1.0, -1e-3));
        assert!(t > TAU - 1e-2 && t < TAU);
        let f = PolarFrame::new(Point::new(0.5, 0.5), Point::new(0.5, 1.5)).unwrap();
        let (r, t) = f.polar(Point::new(-0.5, 0.5));
        assert!((r - 1.0).abs() < 1e-12 && (t - PI / 2.0).abs() < 1e-12);
        assert!(f.point(r, t).dist(Point::new(-0.5, 0.5)) < 1e-12);
    }

    #[test]
    fn spiral_lift_matches_angle() {
        let s = plane();
        let target = Point::polar(4.0, PI / 2.0);
        let p = spiral_path(&PolarFrame::STANDARD, target, 16).unwrap().unwrap();
        assert_eq!(p.source(), Point::new(1.0, 0.0));
        assert_eq!(p.target(), target);
        assert!((s.angle_lift(&p, 0).unwrap() - PI / 2.0).abs() < 1e-9);
        // The homotopy class of the mesh path records θ.
        let class = s.homotopy_class(&p).unwrap();
        assert!((class.swept[0] - PI / 2.0).abs() < 1e-9);

        for theta in [PI, 3.0, 6.0] {
            let mesh = Mesh::spiral(PolarFrame::STANDARD);
            let p = mesh.path_to(Point::polar(0.3, theta)).unwrap().unwrap();
            assert!((s.angle_lift(&p, 0).unwrap() - theta).abs() < 1e-9);
        }
        assert!(spiral_path(&PolarFrame::STANDARD, Point::new(1.0, 0.0), 16)
            .unwrap()
            .is_none());
    }

    #[test]
    fn symmetric_weight_values() {
        let w = MeshWeights::symmetric(1.3, PolarFrame::STANDARD);
        assert!(close(
            w.weight_at(Point::new(2.0, 0.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        ));
        assert!(close(w.weight_at(Point::new(-2.0, 0.0)).unwrap(), half_phase(1.3)));
        // Just below the cut the weight approaches e^{iφ}; at the cut it jumps back to 1.
        let w = MeshWeights::symmetric(TAU, PolarFrame::STANDARD);
        let below = w.weight_at(Point::new(1.0, -1e-9)).unwrap();
        assert!((below - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn chi_examples() {
        let phi = 0.9;
        let blip = Polyline::new(vec![Point::new(2.0, 1.0), Point::new(2.1, 1.2), Point::new(2.0, 1.0)]).unwrap();
        let circle = Polyline::arc(Point::ORIGIN, 3.0, 1.0, TAU, 64).unwrap();
        for rep in [ldw(phi), sym(phi)] {
            assert!(close(rep.chi(&blip).unwrap(), Complex64::new(1.0, 0.0)));
            assert!(close(rep.chi(&circle).unwrap(), GroupRepZ::new(phi).value(1)));
        }
        let s = sym(phi);
        for omega in [0.0, 1.0, PI, 4.0, 6.2] {
            assert!(close(s.half_circle_phase(0.7, omega).unwrap(), half_phase(phi)));
        }
    }

    #[test]
    fn ldw_half_circles() {
        let phi = 1.1;
        let rep = ldw(phi);
        let q0 = half_circle(2.0, 0.0, 64).unwrap();
        let qpi = half_circle(2.0, PI, 64).unwrap();
        assert_eq!(rep.loop_projection(&q0).unwrap(), 0);
        assert_eq!(rep.loop_projection(&qpi).unwrap(), 1);
        assert_eq!(rep.loop_projection(&q0.concat(&qpi).unwrap()).unwrap(), 1);
        assert!(close(rep.chi(&q0).unwrap(), Complex64::new(1.0, 0.0)));
        assert!(close(rep.chi(&qpi).unwrap(), Complex64::from_polar(1.0, phi)));
    }

    #[test]
    fn class_transport_round_trip() {
        let rep = sym(0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let id = rep.class_transport(rep.basepoint(), rep.basepoint(), 0).unwrap();
        assert!(id.same_class(&HomotopyClass::identity(rep.basepoint(), 1)));
        for _ in 0..50 {
            let a = Point::polar(rng.random_range(0.2..5.0), rng.random_range(0.0..TAU));
            let b = Point::polar(rng.random_range(0.2..5.0), rng.random_range(0.0..TAU));
            let n = rng.random_range(-4..=4);
            let class = rep.class_transport(a, b, n).unwrap();
            assert_eq!(rep.class_windings(&class).unwrap(), vec![n]);
            let expected = rep.weights().weight_at(a).unwrap().conj()
                * GroupRepZ::new(0.4).value(n)
                * rep.weights().weight_at(b).unwrap();
            assert!(close(rep.chi_class(&class).unwrap(), expected));
        }
    }

    #[test]
    fn compatibility() {
        let pairs = [
            (Point::new(2.0, 0.5), Point::new(-1.0, -1.0)),
            (Point::new(0.3, 0.0), Point::new(0.0, 4.0)),
        ];
        assert!(ldw(0.3).compatible(&ldw(0.3), &pairs, 5).unwrap());
        assert!(ldw(0.8).compatible(&sym(0.8), &pairs, 5).unwrap());
        assert!(!ldw(0.3).compatible(&ldw(0.7), &pairs, 5).unwrap());
    }

    #[test]
    fn gauge_changes_open_paths_only() {
        let rep = ldw(1.7);
        let terms = vec![
            HarmonicTerm {
                kx: 0.8,
                ky: -0.3,
                amplitude: 1.2,
                phase: 0.1,
            },
            HarmonicTerm {
                kx: 0.1,
                ky: 1.1,
                amplitude: 0.7,
                phase: 2.0,
            },
        ];
        let g = rep.gauge_transform(MeshWeights::harmonic(terms, rep.basepoint()));
        assert!((g.weights().phase_at(g.basepoint()).unwrap()).abs() < 1e-15);
        let pairs = [(Point::new(2.0, 0.5), Point::new(-1.0, -1.0))];
        assert!(rep.compatible(&g, &pairs, 6).unwrap());
        let open = half_circle(1.5, 0.3, 64).unwrap();
        assert!(!close(rep.chi(&open).unwrap(), g.chi(&open).unwrap()));
        let lp = Polyline::arc(Point::new(0.5, 0.0), 2.0, 0.0, -TAU, 64).unwrap();
        assert!(close(rep.chi(&lp).unwrap(), g.chi(&lp).unwrap()));
        // Unity weights recover the Laidlaw–DeWitt gauge.
        let back = g.gauge_transform(MeshWeights::Unity);
        assert!(close(back.chi(&open).unwrap(), rep.chi(&open).unwrap()));
    }

    #[test]
    fn inversion_defects() {
        let samples = [(1.0, 0.0), (2.5, 1.0), (0.4, 4.0)];
        let d = ldw(PI / 2.0).inversion_defect(&samples).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-9, "{d}");
        for phi in [0.3, 1.0, PI, 5.0] {
            assert!(sym(phi).inversion_defect(&samples).unwrap() < 1e-9);
        }
        // z a cube root of unity, half-circle weight w = z²: symmetric weights at φ + 2π.
        let phi = TAU / 3.0;
        let z = Complex64::from_polar(1.0, phi);
        let rep = ldw(phi).gauge_transform(MeshWeights::symmetric(phi + TAU, PolarFrame::STANDARD));
        assert!(rep.inversion_defect(&samples).unwrap() < 1e-9);
        assert!(close(rep.half_circle_phase(1.0, 0.5).unwrap(), z * z));
    }

    #[test]
    fn straight_mesh_rejects_paths_through_the_puncture() {
        let rep = GroupoidRep::ldw(plane(), 0.5, Mesh::straight(PolarFrame::STANDARD)).unwrap();
        let q = Polyline::new(vec![Point::new(-2.0, 0.0), Point::new(-2.0, 1.0)]).unwrap();
        assert!(matches!(rep.chi(&q), Err(Error::ClearanceViolation { .. })));
        let q = Polyline::new(vec![Point::new(2.0, 1.0), Point::new(0.0, 2.0)]).unwrap();
        assert!(rep.chi(&q).is_ok());
    }

    #[test]
    fn table_mesh_lookup() {
        let to_b = Polyline::new(vec![Point::new(1.0, 0.0), Point::new(1.0, 2.0)]).unwrap();
        let mesh = Mesh::table(PolarFrame::STANDARD, vec![to_b]).unwrap();
        let rep = GroupoidRep::ldw(plane(), 0.5, mesh).unwrap();
        let q = Polyline::new(vec![Point::new(1.0, 0.0), Point::new(1.0, 2.0)]).unwrap();
        assert_eq!(rep.loop_projection(&q).unwrap(), 0);
        let q = Polyline::new(vec![Point::new(1.0, 0.0), Point::new(3.0, 0.0)]).unwrap();
        assert!(matches!(rep.chi(&q), Err(Error::MeshUndefined { .. })));
    }

    #[test]
    fn mesh_change_preserves_chi() {
        let rep = sym(2.2).gauge_transform(MeshWeights::harmonic(
            vec![HarmonicTerm {
                kx: 0.4,
                ky: 0.9,
                amplitude: 1.5,
                phase: 0.0,
            }],
            Point::new(1.0, 0.0),
        ));
        let frame = PolarFrame::new(Point::ORIGIN, Point::new(-0.5, 1.5)).unwrap();
        let moved = rep.with_mesh(Mesh::spiral(frame)).unwrap();
        assert!(moved.weights().phase_at(moved.basepoint()).unwrap().abs() < 1e-12);
        let paths = [
            half_circle(1.5, 0.3, 64).unwrap(),
            Polyline::new(vec![Point::new(2.0, -1.0), Point::new(0.5, 3.0), Point::new(-3.0, 0.1)]).unwrap(),
        ];
        let r0 = moved.chi(&paths[0]).unwrap() / rep.chi(&paths[0]).unwrap();
        let r1 = moved.chi(&paths[1]).unwrap() / rep.chi(&paths[1]).unwrap();
        assert!(close(r0, Complex64::new(1.0, 0.0)), "{r0}");
        assert!(close(r1, Complex64::new(1.0, 0.0)), "{r1}");
    }

    #[test]
    fn multi_puncture_product() {
        let space = PuncturedPlane::new(vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)], 0.05).unwrap();
        let frame = PolarFrame::new(Point::new(0.0, 5.0), Point::new(0.0, 3.0)).unwrap();
        let rep = GroupoidRep::new(
            space,
            Mesh::straight(frame),
            MeshWeights::Unity,
            vec![GroupRepZ::new(0.3), GroupRepZ::new(1.1)],
        )
        .unwrap();
        let around_both = Polyline::arc(Point::ORIGIN, 3.0, PI / 2.0, TAU, 64).unwrap();
        assert!(close(rep.chi(&around_both).unwrap(), Complex64::from_polar(1.0, 1.4)));
        let around_right = Polyline::arc(Point::new(1.0, 0.0), 0.5, 0.0, -TAU, 32).unwrap();
        assert!(close(rep.chi(&around_right).unwrap(), Complex64::from_polar(1.0, -1.1)));
        assert!(rep.loop_projection(&around_right).is_err());
    }
}
