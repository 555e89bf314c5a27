//! Homotopy-sector path integrals on a square lattice.
//!
//! All nearest-neighbour walks of a fixed length between two sites are
//! enumerated, sorted into sectors by the winding of their mesh-closed loop,
//! and summed with the free-particle phase `e^{iS/ħ}`. The total propagator
//! weights each sector with the representation's phase for that class:
//!
//! ```text
//! K = Σₙ χ(f_ab(n)) · Kⁿ
//! ```
//!
//! Walks are produced in lexicographic order of their step strings (steps
//! `E < N < S < W`) and every sum runs in that order, so results do not
//! depend on how enumeration is split across threads.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{signed_angle, winding_from_lift, HomotopyClass, Point, Polyline, PuncturedPlane};
use crate::representation::{GroupoidRep, HarmonicTerm, Mesh, MeshWeights, PolarFrame};

/// Default longest walk.
pub const DEFAULT_MAX_STEPS: usize = 14;

/// Environment variable holding the enumeration thread count.
pub const THREADS_ENV: &str = "PATHOID_THREADS";

/// Walks are split into shards by their first `SHARD_DEPTH` steps.
const SHARD_DEPTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Site {
    pub i: i32,
    pub j: i32,
}

impl Site {
    pub const fn new(i: i32, j: i32) -> Self {
        Self { i, j }
    }

    pub fn step(self, s: Step) -> Self {
        let (di, dj) = s.delta();
        Self::new(self.i + di, self.j + dj)
    }

    pub fn manhattan(self, o: Self) -> u32 {
        self.i.abs_diff(o.i) + self.j.abs_diff(o.j)
    }
}

impl From<[i32; 2]> for Site {
    fn from([i, j]: [i32; 2]) -> Self {
        Self { i, j }
    }
}

impl From<Site> for [i32; 2] {
    fn from(s: Site) -> Self {
        [s.i, s.j]
    }
}

/// A unit lattice move. Declaration order is the canonical (lexicographic) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    East,
    North,
    South,
    West,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::East, Step::North, Step::South, Step::West];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Step::East => (1, 0),
            Step::North => (0, 1),
            Step::South => (0, -1),
            Step::West => (-1, 0),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Step::East => 'E',
            Step::North => 'N',
            Step::South => 'S',
            Step::West => 'W',
        }
    }
}

/// A square lattice with one puncture at a plaquette center and the
/// free-particle parameters of the discretized action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub spacing: f64,
    /// Sites are `(i, j)·spacing` with `|i|, |j| ≤ extent`.
    pub extent: i32,
    /// Position of the puncture in plane coordinates.
    pub puncture_offset: Point,
    pub mass: f64,
    pub hbar: f64,
    pub dt: f64,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        Self {
            spacing: 1.0,
            extent: 4,
            puncture_offset: Point::new(0.5, 0.5),
            mass: 1.0,
            hbar: 1.0,
            dt: 1.0,
        }
    }
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("spacing", self.spacing),
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("dt", self.dt),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.extent < 0 {
            return Err(Error::InvalidArgument("extent must be non-negative".into()));
        }
        let u = self.puncture_offset.x / self.spacing - 0.5;
        let v = self.puncture_offset.y / self.spacing - 0.5;
        if (u - u.round()).abs() > 1e-9 || (v - v.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "puncture ({}, {}) is not at a plaquette center",
                self.puncture_offset.x, self.puncture_offset.y
            )));
        }
        Ok(())
    }

    /// The punctured plane seen by lattice walks. Every lattice edge stays
    /// half a spacing from the puncture, just above the clearance.
    pub fn space(&self) -> Result<PuncturedPlane> {
        self.validate()?;
        PuncturedPlane::new(vec![self.puncture_offset], self.spacing * (0.5 - 1e-6))
    }

    pub fn contains(&self, s: Site) -> bool {
        s.i.abs() <= self.extent && s.j.abs() <= self.extent
    }

    pub fn position(&self, s: Site) -> Point {
        Point::new(s.i as f64 * self.spacing, s.j as f64 * self.spacing)
    }

    /// Action of one nearest-neighbour step: `(m/2)(spacing/dt)²·dt`.
    pub fn step_action(&self) -> f64 {
        let v = self.spacing / self.dt;
        0.5 * self.mass * v * v * self.dt
    }

    fn check_site(&self, s: Site) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "site ({}, {}) is off the lattice",
                s.i, s.j
            )))
        }
    }
}

/// Caps on enumeration size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: usize,
    /// Upper bound on `4^N`, the size of the unpruned walk frontier.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
            max_nodes: 1 << (2 * DEFAULT_MAX_STEPS),
        }
    }
}

impl Budget {
    fn check(&self, steps: usize) -> Result<()> {
        if steps > self.max_steps {
            return Err(Error::BudgetExceeded(format!(
                "{steps} steps exceeds the limit of {}",
                self.max_steps
            )));
        }
        let frontier = 4u64.checked_pow(steps as u32).unwrap_or(u64::MAX);
        if frontier > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "4^{steps} walks exceeds the node cap of {}",
                self.max_nodes
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Walk {
    pub start: Site,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn sites(&self) -> Vec<Site> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start);
        let mut s = self.start;
        for &st in &self.steps {
            s = s.step(st);
            out.push(s);
        }
        out
    }

    pub fn end(&self) -> Site {
        self.steps.iter().fold(self.start, |s, &st| s.step(st))
    }

    /// Step string such as `ENWS`.
    pub fn label(&self) -> String {
        self.steps.iter().map(|s| s.letter()).collect()
    }

    /// The walk as a plane path; the zero-step walk has none.
    pub fn polyline(&self, spec: &LatticeSpec) -> Option<Polyline> {
        if self.steps.is_empty() {
            return None;
        }
        let pts = self.sites().into_iter().map(|s| spec.position(s)).collect();
        Some(Polyline::new(pts).expect("lattice steps never repeat a vertex"))
    }

    /// The homotopy class of the walk in the lattice's punctured plane.
    pub fn class(&self, spec: &LatticeSpec, space: &PuncturedPlane) -> Result<HomotopyClass> {
        match self.polyline(spec) {
            Some(p) => space.homotopy_class(&p),
            None => Ok(HomotopyClass::identity(
                spec.position(self.start),
                space.punctures().len(),
            )),
        }
    }
}

/// Every `steps`-step nearest-neighbour walk from `a` to `b` inside the lattice,
/// in canonical order.
pub fn enumerate_walks(spec: &LatticeSpec, a: Site, b: Site, steps: usize, budget: Budget) -> Result<Vec<Walk>> {
    spec.validate()?;
    spec.check_site(a)?;
    spec.check_site(b)?;
    budget.check(steps)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(steps);
    dfs(spec, a, b, steps, &mut prefix, &mut |path: &[Step]| {
        out.push(Walk {
            start: a,
            steps: path.to_vec(),
        })
    });
    Ok(out)
}

fn dfs(
    spec: &LatticeSpec,
    at: Site,
    b: Site,
    remaining: usize,
    prefix: &mut Vec<Step>,
    emit: &mut impl FnMut(&[Step]),
) {
    if remaining == 0 {
        if at == b {
            emit(prefix);
        }
        return;
    }
    for s in Step::ALL {
        let next = at.step(s);
        if spec.contains(next) && (next.manhattan(b) as usize) < remaining {
            prefix.push(s);
            dfs(spec, next, b, remaining - 1, prefix, emit);
            prefix.pop();
        }
    }
}

/// Free-particle action `Σ (m/2)(Δx/dt)²·dt` of a lattice walk.
pub fn discrete_action(spec: &LatticeSpec, walk: &Walk) -> f64 {
    let per_step = spec.step_action();
    walk.steps.iter().fold(0.0, |acc, _| acc + per_step)
}

/// Partitions walks by the winding of their mesh-closed loop.
pub fn sector_decompose(rep: &GroupoidRep, spec: &LatticeSpec, walks: &[Walk]) -> Result<BTreeMap<i64, Vec<Walk>>> {
    let space = rep.space();
    let mut out: BTreeMap<i64, Vec<Walk>> = BTreeMap::new();
    let Some(first) = walks.first() else { return Ok(out) };
    let (a, b) = (first.start, first.end());
    for w in walks {
        if w.start != a || w.end() != b {
            return Err(Error::InvalidArgument("walks do not share endpoints".into()));
        }
        let n = match w.polyline(spec) {
            Some(p) => rep.loop_projection(&p)?,
            None => rep.class_windings(&w.class(spec, space)?)?[0],
        };
        out.entry(n).or_default().push(w.clone());
    }
    Ok(out)
}

/// `Σ e^{iS/ħ} / total` over one sector's walks, in the order given.
pub fn partial_amplitude(spec: &LatticeSpec, walks: &[Walk], total: usize) -> Result<Complex64> {
    if walks.is_empty() {
        return Err(Error::EmptySector);
    }
    let sum: Complex64 = walks
        .iter()
        .map(|w| Complex64::from_polar(1.0, discrete_action(spec, w) / spec.hbar))
        .sum();
    Ok(sum / total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sector {
    pub winding: i64,
    /// Representative class `f_ab(n)` of the sector.
    pub class: HomotopyClass,
    pub count: usize,
    pub amplitude: Complex64,
}

/// Partial amplitudes `Kⁿ` for one pair of endpoints and walk length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorAmplitudes {
    pub source: Site,
    pub target: Site,
    pub steps: usize,
    pub total_walks: usize,
    pub sectors: BTreeMap<i64, Sector>,
}

impl SectorAmplitudes {
    /// Builds sectors from explicit walks via [`sector_decompose`] and
    /// [`partial_amplitude`].
    pub fn from_walks(
        rep: &GroupoidRep,
        spec: &LatticeSpec,
        a: Site,
        b: Site,
        steps: usize,
        walks: &[Walk],
    ) -> Result<Self> {
        let total = walks.len();
        let parts = sector_decompose(rep, spec, walks)?;
        let (pa, pb) = (spec.position(a), spec.position(b));
        let mut sectors = BTreeMap::new();
        for (n, ws) in parts {
            sectors.insert(
                n,
                Sector {
                    winding: n,
                    class: rep.class_transport(pa, pb, n)?,
                    count: ws.len(),
                    amplitude: partial_amplitude(spec, &ws, total)?,
                },
            );
        }
        Ok(Self {
            source: a,
            target: b,
            steps,
            total_walks: total,
            sectors,
        })
    }

    /// Streams the enumeration, tracking each walk's swept angle and action
    /// incrementally instead of materializing polylines.
    pub fn enumerate(
        rep: &GroupoidRep,
        spec: &LatticeSpec,
        a: Site,
        b: Site,
        steps: usize,
        budget: Budget,
    ) -> Result<Self> {
        spec.validate()?;
        spec.check_site(a)?;
        spec.check_site(b)?;
        budget.check(steps)?;
        let space = rep.space();
        let center = space.single_puncture()?;
        if *space != spec.space()? {
            return Err(Error::InvalidArgument(
                "representation is not defined on the lattice space".into(),
            ));
        }
        let (pa, pb) = (spec.position(a), spec.position(b));
        let la = rep.mesh().lifts_to(space, pa)?[0];
        let lb = rep.mesh().lifts_to(space, pb)?[0];

        let shards = shard_prefixes(spec, a, b, steps);
        let run = |prefix: &Vec<Step>| -> Vec<(f64, f64)> {
            let mut out = Vec::new();
            let mut at = a;
            let mut swept = 0.0;
            let mut action = 0.0;
            let per_step = spec.step_action();
            for &s in prefix {
                let next = at.step(s);
                swept += signed_angle(center, spec.position(at), spec.position(next));
                action += per_step;
                at = next;
            }
            walk_stream(spec, center, at, b, steps - prefix.len(), swept, action, &mut out);
            out
        };
        #[cfg(feature = "parallel")]
        let results: Vec<Vec<(f64, f64)>> = {
            use rayon::prelude::*;
            shards.par_iter().map(run).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<Vec<(f64, f64)>> = shards.iter().map(run).collect();

        let total: usize = results.iter().map(Vec::len).sum();
        let mut acc: BTreeMap<i64, (usize, Complex64)> = BTreeMap::new();
        for (swept, action) in results.into_iter().flatten() {
            let n = winding_from_lift(la + swept - lb)?;
            let e = acc.entry(n).or_insert((0, Complex64::new(0.0, 0.0)));
            e.0 += 1;
            e.1 += Complex64::from_polar(1.0, action / spec.hbar);
        }
        let mut sectors = BTreeMap::new();
        for (n, (count, sum)) in acc {
            sectors.insert(
                n,
                Sector {
                    winding: n,
                    class: HomotopyClass {
                        source: pa,
                        target: pb,
                        swept: vec![lb - la + TAU * n as f64],
                    },
                    count,
                    amplitude: sum / total as f64,
                },
            );
        }
        Ok(Self {
            source: a,
            target: b,
            steps,
            total_walks: total,
            sectors,
        })
    }

    /// `Σₙ Kⁿ`, the propagator with every sector weighted by 1.
    pub fn unrestricted_sum(&self) -> Complex64 {
        self.sectors.values().map(|s| s.amplitude).sum()
    }

    pub fn magnitude_bound(&self) -> f64 {
        self.sectors.values().map(|s| s.amplitude.norm()).sum()
    }
}

/// Canonically ordered prefixes of length `min(steps, SHARD_DEPTH)` that can still reach `b`.
fn shard_prefixes(spec: &LatticeSpec, a: Site, b: Site, steps: usize) -> Vec<Vec<Step>> {
    let depth = steps.min(SHARD_DEPTH);
    let mut out = vec![(a, Vec::new())];
    for level in 0..depth {
        let remaining = steps - level - 1;
        out = out
            .into_iter()
            .flat_map(|(at, prefix): (Site, Vec<Step>)| {
                Step::ALL.into_iter().filter_map(move |s| {
                    let next = at.step(s);
                    (spec.contains(next) && next.manhattan(b) as usize <= remaining).then(|| {
                        let mut p = prefix.clone();
                        p.push(s);
                        (next, p)
                    })
                })
            })
            .collect();
    }
    out.into_iter().map(|(_, p)| p).collect()
}

#[allow(clippy::too_many_arguments)]
fn walk_stream(
    spec: &LatticeSpec,
    center: Point,
    at: Site,
    b: Site,
    remaining: usize,
    swept: f64,
    action: f64,
    out: &mut Vec<(f64, f64)>,
) {
    if remaining == 0 {
        if at == b {
            out.push((swept, action));
        }
        return;
    }
    let here = spec.position(at);
    let per_step = spec.step_action();
    for s in Step::ALL {
        let next = at.step(s);
        if spec.contains(next) && (next.manhattan(b) as usize) < remaining {
            let turn = signed_angle(center, here, spec.position(next));
            walk_stream(
                spec,
                center,
                next,
                b,
                remaining - 1,
                swept + turn,
                action + per_step,
                out,
            );
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalPropagator {
    pub value: Complex64,
    pub flux: f64,
    pub source: Site,
    pub target: Site,
    pub steps: usize,
}

/// `K = Σₙ χ(f_ab(n))·Kⁿ`.
pub fn total_propagator(sectors: &SectorAmplitudes, rep: &GroupoidRep) -> Result<TotalPropagator> {
    let mut value = Complex64::new(0.0, 0.0);
    for s in sectors.sectors.values() {
        value += rep.chi_class(&s.class)? * s.amplitude;
    }
    Ok(TotalPropagator {
        value,
        flux: rep.group().first().map_or(0.0, |d| d.phi),
        source: sectors.source,
        target: sectors.target,
        steps: sectors.steps,
    })
}

/// Laidlaw–DeWitt representation on the lattice space with a spiral mesh
/// around the puncture, based at `base`.
pub fn lattice_rep(spec: &LatticeSpec, base: Site, phi: f64) -> Result<GroupoidRep> {
    let space = spec.space()?;
    let frame = PolarFrame::new(spec.puncture_offset, spec.position(base))?;
    GroupoidRep::ldw(space, phi, Mesh::spiral(frame))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxPoint {
    pub phi: f64,
    pub k: Complex64,
}

impl FluxPoint {
    pub fn abs(&self) -> f64 {
        self.k.norm()
    }
}

/// `K(φ)` for each flux value; sectors are enumerated once.
pub fn flux_sweep(
    spec: &LatticeSpec,
    a: Site,
    b: Site,
    steps: usize,
    phis: &[f64],
    budget: Budget,
) -> Result<Vec<FluxPoint>> {
    let labels = lattice_rep(spec, a, 0.0)?;
    let sectors = SectorAmplitudes::enumerate(&labels, spec, a, b, steps, budget)?;
    phis.iter()
        .map(|&phi| {
            let rep = lattice_rep(spec, a, phi)?;
            Ok(FluxPoint {
                phi,
                k: total_propagator(&sectors, &rep)?.value,
            })
        })
        .collect()
}

/// Smooth random mesh weights: a few sinusoidal phase terms, zero at `basepoint`.
pub fn random_gauge(rng: &mut impl Rng, basepoint: Point, terms: usize) -> MeshWeights {
    let terms = (0..terms)
        .map(|_| HarmonicTerm {
            kx: rng.random_range(-2.0..2.0),
            ky: rng.random_range(-2.0..2.0),
            amplitude: rng.random_range(0.0..TAU),
            phase: rng.random_range(0.0..TAU),
        })
        .collect();
    MeshWeights::harmonic(terms, basepoint)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeCheck {
    pub seed: u64,
    pub phi: f64,
    pub sectors: usize,
    pub reference_abs: f64,
    pub gauge_abs: Vec<f64>,
    pub max_deviation: f64,
}

/// Compares `|K|` under `gauges` seeded random mesh-weight choices with the
/// Laidlaw–DeWitt gauge.
#[allow(clippy::too_many_arguments)]
pub fn gauge_check(
    spec: &LatticeSpec,
    a: Site,
    b: Site,
    steps: usize,
    phi: f64,
    gauges: usize,
    seed: u64,
    budget: Budget,
) -> Result<GaugeCheck> {
    let rep = lattice_rep(spec, a, phi)?;
    let sectors = SectorAmplitudes::enumerate(&rep, spec, a, b, steps, budget)?;
    let reference_abs = total_propagator(&sectors, &rep)?.value.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauge_abs = (0..gauges)
        .map(|_| {
            let g = rep.gauge_transform(random_gauge(&mut rng, rep.basepoint(), 3));
            Ok(total_propagator(&sectors, &g)?.value.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = gauge_abs.iter().map(|k| (k - reference_abs).abs()).fold(0.0, f64::max);
    Ok(GaugeCheck {
        seed,
        phi,
        sectors: sectors.sectors.len(),
        reference_abs,
        gauge_abs,
        max_deviation,
    })
}

/// Sets the global enumeration thread count from `PATHOID_THREADS`, if present.
pub fn configure_threads_from_env() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={raw} is not a thread count")))?;
    #[cfg(feature = "parallel")]
    {
        // A second initialization keeps the first pool; that is fine for a CLI.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
