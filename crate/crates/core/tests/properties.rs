mod common;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use pathoid::groupoid::WeakGroupoid;
use pathoid::planar::half_circle;
use pathoid::propagator::{
    enumerate_walks, flux_sweep, lattice_rep, random_gauge, total_propagator, Budget, SectorAmplitudes,
};
use pathoid::representation::{GroupoidRep, Mesh, MeshWeights, PolarFrame};
use pathoid::{LatticeSpec, Point, PuncturedPlane, Site};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn plane() -> PuncturedPlane {
    PuncturedPlane::origin(0.05).unwrap()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-9
}

fn reps(rng: &mut ChaCha8Rng, phi: f64) -> Vec<GroupoidRep> {
    let ldw = GroupoidRep::ldw(plane(), phi, Mesh::spiral(PolarFrame::STANDARD)).unwrap();
    let sym = GroupoidRep::symmetric(plane(), PolarFrame::STANDARD, phi).unwrap();
    let gauged = ldw.gauge_transform(random_gauge(rng, ldw.basepoint(), 3));
    vec![ldw, sym, gauged]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_is_additive_and_antisymmetric(seed in any::<u64>(), n1 in 1usize..8, n2 in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        let p = random_path(&mut rng, &s, n1);
        let q = random_path_from(&mut rng, &s, p.target(), n2);
        let pq = p.concat(&q).unwrap();
        let (lp, lq, lpq) = (s.angle_lift(&p, 0).unwrap(), s.angle_lift(&q, 0).unwrap(), s.angle_lift(&pq, 0).unwrap());
        prop_assert!((lpq - lp - lq).abs() < 1e-9);
        prop_assert_eq!(s.angle_lift(&p.reverse(), 0).unwrap(), -lp);
    }

    #[test]
    fn concatenation_is_associative_up_to_homotopy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        let p = random_path(&mut rng, &s, 3);
        let q = random_path_from(&mut rng, &s, p.target(), 3);
        let r = random_path_from(&mut rng, &s, q.target(), 3);
        let left = p.concat(&q).unwrap().concat(&r).unwrap();
        let right = p.concat(&q.concat(&r).unwrap()).unwrap();
        prop_assert!(s.homotopic(&left, &right).unwrap());
    }

    #[test]
    fn dense_loops_have_integral_lifts(turns in -3i32..=3, r in 0.2f64..5.0, start in 0.0f64..TAU, per_turn in 16usize..40) {
        prop_assume!(turns != 0);
        let s = plane();
        let segs = per_turn * turns.unsigned_abs() as usize;
        let lp = pathoid::Polyline::arc(Point::ORIGIN, r, start, TAU * turns as f64, segs).unwrap();
        let lift = s.angle_lift(&lp, 0).unwrap() / TAU;
        prop_assert!((lift - lift.round()).abs() < 1e-6);
        prop_assert_eq!(s.winding_number(&lp).unwrap(), vec![turns as i64]);
    }

    #[test]
    fn chi_respects_concatenation_and_reversal(seed in any::<u64>(), phi in -7.0f64..7.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        let p = random_path(&mut rng, &s, 4);
        let q = random_path_from(&mut rng, &s, p.target(), 4);
        let pq = p.concat(&q).unwrap();
        for rep in reps(&mut rng, phi) {
            let (cp, cq) = (rep.chi(&p).unwrap(), rep.chi(&q).unwrap());
            prop_assert!(close(rep.chi(&pq).unwrap(), cp * cq));
            prop_assert!(close(rep.chi(&p.reverse()).unwrap(), cp.conj()));
        }
    }

    #[test]
    fn loops_see_only_the_flux(seed in any::<u64>(), phi in -7.0f64..7.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        let lp = random_loop(&mut rng, &s, 6);
        let w = s.winding_number(&lp).unwrap()[0];
        let expected = Complex64::from_polar(1.0, phi * w as f64);
        for rep in reps(&mut rng, phi) {
            prop_assert!(close(rep.chi(&lp).unwrap(), expected));
        }
    }

    #[test]
    fn homotopic_paths_share_chi(seed in any::<u64>(), phi in -7.0f64..7.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        // p followed by a contractible excursion is homotopic to p
        let p = random_path(&mut rng, &s, 4);
        let detour = random_path_from(&mut rng, &s, p.target(), 3);
        let q = p.concat(&detour).unwrap().concat(&detour.reverse()).unwrap();
        prop_assert!(s.homotopic(&p, &q).unwrap());
        for rep in reps(&mut rng, phi) {
            prop_assert!(close(rep.chi(&p).unwrap(), rep.chi(&q).unwrap()));
        }
    }

    #[test]
    fn random_gauges_are_compatible(seed in any::<u64>(), phi in -7.0f64..7.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = plane();
        let base = GroupoidRep::ldw(s.clone(), phi, Mesh::spiral(PolarFrame::STANDARD)).unwrap();
        let g1 = base.gauge_transform(random_gauge(&mut rng, base.basepoint(), 4));
        let g2 = base.gauge_transform(random_gauge(&mut rng, base.basepoint(), 2));
        let pairs: Vec<(Point, Point)> = (0..4)
            .map(|_| (random_clear_point(&mut rng, &s), random_clear_point(&mut rng, &s)))
            .collect();
        prop_assert!(g1.compatible(&g2, &pairs, 5).unwrap());
    }

    #[test]
    fn half_circles_get_half_the_flux(phi in -10.0f64..10.0, r in 0.2f64..10.0, omega in 0.0f64..TAU) {
        let rep = GroupoidRep::symmetric(plane(), PolarFrame::STANDARD, phi).unwrap();
        prop_assert!(close(rep.half_circle_phase(r, omega).unwrap(), Complex64::from_polar(1.0, phi / 2.0)));
    }

    #[test]
    fn target_source_characterization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_groupoid(&mut rng, 50);
        let g = shuffled(&mut rng, &g);
        for a in 0..g.len() {
            let t = g.target_set(a).unwrap();
            prop_assert_eq!(&g.source_set(g.inverse(a).unwrap()).unwrap(), &t);
            for b in 0..g.len() {
                prop_assert_eq!(g.compose(a, b).is_ok(), t == g.source_set(b).unwrap());
            }
        }
        prop_assert!(g.verify_axioms().unwrap().passed);
    }

    #[test]
    fn weak_inverses_are_strong(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_groupoid(&mut rng, 40);
        let g = shuffled(&mut rng, &g);
        let weak = WeakGroupoid::search_inverses(g.table().clone()).unwrap();
        let report = weak.derive_strong_inverses().unwrap();
        prop_assert!(report.passed, "{:?}", report);
        prop_assert_eq!(&weak.left_inverse, &weak.right_inverse);
    }
}

#[test]
fn ray_oracle_agrees_on_a_thousand_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let s = plane();
    for _ in 0..1000 {
        let lp = random_loop(&mut rng, &s, 20);
        assert_eq!(
            s.winding_number(&lp).unwrap()[0],
            ray_crossing_winding(&lp, Point::ORIGIN)
        );
    }
}

#[test]
fn sector_sum_equals_direct_sum() {
    let spec = LatticeSpec {
        mass: 1.3,
        dt: 0.8,
        ..LatticeSpec::default()
    };
    let a = Site::new(1, 0);
    let b = Site::new(0, 0);
    let walks = enumerate_walks(&spec, a, b, 7, Budget::default()).unwrap();
    // brute force: every walk, no decomposition
    let direct: Complex64 = walks
        .iter()
        .map(|w| {
            let s: f64 = w
                .steps
                .iter()
                .map(|_| 0.5 * spec.mass * (spec.spacing / spec.dt).powi(2) * spec.dt)
                .sum();
            Complex64::from_polar(1.0, s / spec.hbar)
        })
        .sum::<Complex64>()
        / walks.len() as f64;
    let rep = lattice_rep(&spec, a, 0.0).unwrap();
    let sectors = SectorAmplitudes::enumerate(&rep, &spec, a, b, 7, Budget::default()).unwrap();
    assert_eq!(sectors.total_walks, 1225);
    assert!((sectors.unrestricted_sum() - direct).norm() < 1e-12);
}

#[test]
fn compatible_reps_give_equal_magnitudes() {
    let spec = LatticeSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (a, b, n) in [
        (Site::new(1, 0), Site::new(0, 0), 7),
        (Site::new(2, 1), Site::new(-1, 1), 7),
        (Site::new(1, 0), Site::new(1, 0), 8),
    ] {
        let rep = lattice_rep(&spec, a, 2.1).unwrap();
        let sectors = SectorAmplitudes::enumerate(&rep, &spec, a, b, n, Budget::default()).unwrap();
        let k0 = total_propagator(&sectors, &rep).unwrap().value.norm();
        for _ in 0..5 {
            let g = rep.gauge_transform(random_gauge(&mut rng, rep.basepoint(), 3));
            let k = total_propagator(&sectors, &g).unwrap().value.norm();
            assert!((k - k0).abs() < 1e-9);
        }
    }
}

#[test]
fn base_point_and_mesh_do_not_change_magnitudes() {
    let spec = LatticeSpec::default();
    let (a, b) = (Site::new(2, 1), Site::new(-1, 0));
    let phi = 1.9;
    let reference = lattice_rep(&spec, a, phi).unwrap();
    let sectors = SectorAmplitudes::enumerate(&reference, &spec, a, b, 8, Budget::default()).unwrap();
    let k0 = total_propagator(&sectors, &reference).unwrap().value;

    let space = spec.space().unwrap();
    let frames = [
        PolarFrame::new(spec.puncture_offset, Point::new(-3.0, -2.0)).unwrap(),
        PolarFrame::new(spec.puncture_offset, Point::new(0.5, 3.5)).unwrap(),
    ];
    for frame in frames {
        // Laidlaw–DeWitt gauge on a different mesh and base point: same |K|
        let other = GroupoidRep::ldw(space.clone(), phi, Mesh::spiral(frame)).unwrap();
        let resectored = SectorAmplitudes::enumerate(&other, &spec, a, b, 8, Budget::default()).unwrap();
        let k = total_propagator(&resectored, &other).unwrap().value;
        assert!((k.norm() - k0.norm()).abs() < 1e-9);
        // transported weights: same K, not only |K|
        let moved = reference.with_mesh(Mesh::spiral(frame)).unwrap();
        let k = total_propagator(&sectors, &moved).unwrap().value;
        assert!((k - k0).norm() < 1e-9);
    }
    let straight = GroupoidRep::ldw(
        space,
        phi,
        Mesh::straight(PolarFrame::new(spec.puncture_offset, Point::new(3.0, 4.0)).unwrap()),
    )
    .unwrap();
    let k = total_propagator(&sectors, &straight).unwrap().value;
    assert!((k.norm() - k0.norm()).abs() < 1e-9);
}

#[test]
fn sweeps_are_periodic_and_even() {
    let spec = LatticeSpec::default();
    let a = Site::new(1, 0);
    let phis: Vec<f64> = (0..12).map(|k| -PI + 0.55 * k as f64).collect();
    let shifted: Vec<f64> = phis.iter().map(|p| p + TAU).collect();
    let mirrored: Vec<f64> = phis.iter().map(|p| -p).collect();
    let base = flux_sweep(&spec, a, Site::new(0, 0), 7, &phis, Budget::default()).unwrap();
    let up = flux_sweep(&spec, a, Site::new(0, 0), 7, &shifted, Budget::default()).unwrap();
    let down = flux_sweep(&spec, a, Site::new(0, 0), 7, &mirrored, Budget::default()).unwrap();
    for i in 0..phis.len() {
        assert!((base[i].abs() - up[i].abs()).abs() < 1e-9);
        assert!((base[i].abs() - down[i].abs()).abs() < 1e-9);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = LatticeSpec::default();
    let a = Site::new(1, 0);
    let rep = lattice_rep(&spec, a, 0.7).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| SectorAmplitudes::enumerate(&rep, &spec, a, a, 8, Budget::default()).unwrap())
    };
    let one = run(1);
    for t in [2, 3, 8] {
        assert_eq!(one, run(t));
    }
}

#[test]
fn half_circle_under_gauge_lift() {
    // the same construction for arbitrary flux, not only odd roots of unity
    for phi in [0.3, 1.0, 2.5, 5.0] {
        let ldw = GroupoidRep::ldw(plane(), phi, Mesh::spiral(PolarFrame::STANDARD)).unwrap();
        let lifted = ldw.gauge_transform(MeshWeights::symmetric(phi + TAU, PolarFrame::STANDARD));
        for omega in [0.0, 2.0, 4.5] {
            let q = half_circle(1.5, omega, 64).unwrap();
            assert!(close(lifted.chi(&q).unwrap(), -Complex64::from_polar(1.0, phi / 2.0)));
        }
    }
}
