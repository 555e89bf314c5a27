//! Browser bindings for the demo page in `www/`.

use std::f64::consts::TAU;

use pathoid::planar::{half_circle, Point, Polyline, PuncturedPlane};
use pathoid::propagator::{lattice_rep, total_propagator, Budget, LatticeSpec, SectorAmplitudes, Site};
use pathoid::representation::{GroupoidRep, Mesh, PolarFrame, HALF_CIRCLE_SEGMENTS};
use wasm_bindgen::prelude::*;

/// Walk lengths above this take too long for an interactive page.
const MAX_DEMO_STEPS: usize = 12;

fn js(e: pathoid::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn origin_rep(phi: f64, symmetric: bool) -> pathoid::Result<GroupoidRep> {
    let space = PuncturedPlane::origin(1e-3)?;
    if symmetric {
        GroupoidRep::symmetric(space, PolarFrame::STANDARD, phi)
    } else {
        GroupoidRep::ldw(space, phi, Mesh::spiral(PolarFrame::STANDARD))
    }
}

/// Weights of the counter-clockwise half circle of radius `r` from angle
/// `omega` and of its point inversion, as `[re, im, re_inv, im_inv]`.
#[wasm_bindgen]
pub fn half_circle_weights(phi: f64, r: f64, omega: f64, symmetric: bool) -> Result<Vec<f64>, JsValue> {
    let rep = origin_rep(phi, symmetric).map_err(js)?;
    let q = half_circle(r, omega, HALF_CIRCLE_SEGMENTS).map_err(js)?;
    let inverted = rep.space().invert_point(&q).map_err(js)?;
    let (a, b) = (rep.chi(&q).map_err(js)?, rep.chi(&inverted).map_err(js)?);
    Ok(vec![a.re, a.im, b.re, b.im])
}

/// `|K(φ)|` at `samples` evenly spaced fluxes in `[0, 4π]` for walks of
/// `steps` steps from `(ai, aj)` to `(bi, bj)` on the default lattice.
/// Returns `[total_walks, sectors, |K|...]`.
#[wasm_bindgen]
pub fn flux_curve(ai: i32, aj: i32, bi: i32, bj: i32, steps: usize, samples: usize) -> Result<Vec<f64>, JsValue> {
    let spec = LatticeSpec::default();
    let (a, b) = (Site::new(ai, aj), Site::new(bi, bj));
    let budget = Budget {
        max_steps: MAX_DEMO_STEPS,
        ..Budget::default()
    };
    let sectors = SectorAmplitudes::enumerate(&lattice_rep(&spec, a, 0.0).map_err(js)?, &spec, a, b, steps, budget)
        .map_err(js)?;
    let mut out = vec![sectors.total_walks as f64, sectors.sectors.len() as f64];
    for k in 0..samples {
        let phi = 2.0 * TAU * k as f64 / (samples.max(2) - 1) as f64;
        let rep = lattice_rep(&spec, a, phi).map_err(js)?;
        out.push(total_propagator(&sectors, &rep).map_err(js)?.value.norm());
    }
    Ok(out)
}

/// Winding numbers of the closed polygon through `xy` (flat `[x0, y0, x1, y1, ...]`)
/// around each puncture in `punctures` (same layout).
#[wasm_bindgen]
pub fn polygon_windings(xy: &[f64], punctures: &[f64]) -> Result<Vec<i32>, JsValue> {
    let pts = |v: &[f64]| v.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect::<Vec<_>>();
    let space = PuncturedPlane::new(pts(punctures), 1e-6).map_err(js)?;
    let path = Polyline::closed(&pts(xy)).map_err(js)?;
    let w = space.winding_number(&path).map_err(js)?;
    Ok(w.into_iter().map(|n| n as i32).collect())
}
