#![allow(dead_code)]

use pathoid::groupoid::{CompositionTable, FiniteGroupoid};
use pathoid::{Point, Polyline, PuncturedPlane};
use rand::seq::SliceRandom;
use rand::Rng;

/// Signed crossings of the horizontal ray from `c` towards +x, counted with
/// a half-open rule on the ray's line. Independent of any angle computation.
pub fn ray_crossing_winding(path: &Polyline, c: Point) -> i64 {
    let mut w = 0;
    for s in path.vertices().windows(2) {
        let (p, q) = (s[0] - c, s[1] - c);
        if (p.y <= 0.0) != (q.y <= 0.0) {
            let x = p.x - p.y * (q.x - p.x) / (q.y - p.y);
            if x > 0.0 {
                w += if q.y > p.y { 1 } else { -1 };
            }
        }
    }
    w
}

pub fn random_point(rng: &mut impl Rng, half_width: f64) -> Point {
    Point::new(
        rng.random_range(-half_width..half_width),
        rng.random_range(-half_width..half_width),
    )
}

/// A random polyline from `start` with `segments` segments that respects the
/// space's clearance, built by rejection of offending vertices.
pub fn random_path_from(rng: &mut impl Rng, space: &PuncturedPlane, start: Point, segments: usize) -> Polyline {
    let mut v = vec![start];
    while v.len() <= segments {
        let next = random_point(rng, 5.0);
        let Ok(seg) = Polyline::new(vec![*v.last().unwrap(), next]) else {
            continue;
        };
        if space.lifts(&seg).is_ok() {
            v.push(next);
        }
    }
    Polyline::new(v).unwrap()
}

pub fn random_clear_point(rng: &mut impl Rng, space: &PuncturedPlane) -> Point {
    loop {
        let p = random_point(rng, 5.0);
        if space.check_point(p).is_ok() {
            return p;
        }
    }
}

pub fn random_path(rng: &mut impl Rng, space: &PuncturedPlane, segments: usize) -> Polyline {
    let start = random_clear_point(rng, space);
    random_path_from(rng, space, start, segments)
}

/// A random closed polyline with `corners` corners respecting clearance.
pub fn random_loop(rng: &mut impl Rng, space: &PuncturedPlane, corners: usize) -> Polyline {
    loop {
        let open = random_path(rng, space, corners - 1);
        let mut v = open.vertices().to_vec();
        v.push(v[0]);
        if let Ok(p) = Polyline::new(v) {
            if space.lifts(&p).is_ok() {
                return p;
            }
        }
    }
}

/// Copies a groupoid under a random relabeling of its elements.
pub fn shuffled(rng: &mut impl Rng, g: &FiniteGroupoid) -> FiniteGroupoid {
    let n = g.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut names = vec![String::new(); n];
    for i in 0..n {
        names[perm[i]] = g.name(i).to_string();
    }
    let mut t = CompositionTable::new(names).unwrap();
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = g.table().get(a, b) {
                t.set(perm[a], perm[b], perm[c]).unwrap();
            }
        }
    }
    let mut inverse = vec![0; n];
    for a in 0..n {
        inverse[perm[a]] = perm[g.inverse(a).unwrap()];
    }
    FiniteGroupoid::new(t, inverse).unwrap()
}

/// A random pair groupoid or group bundle with at most `max_elems` elements.
pub fn random_groupoid(rng: &mut impl Rng, max_elems: usize) -> FiniteGroupoid {
    if rng.random_bool(0.5) {
        let k = rng.random_range(1..=((max_elems as f64).sqrt() as usize).max(1));
        FiniteGroupoid::pair(k)
    } else {
        let mut parts = Vec::new();
        let mut size = 0;
        loop {
            let g = match rng.random_range(0..4) {
                0 => FiniteGroupoid::symmetric(3),
                1 => FiniteGroupoid::pair(rng.random_range(1..=3)),
                _ => FiniteGroupoid::cyclic(rng.random_range(1..=8)),
            };
            if size + g.len() > max_elems {
                break;
            }
            size += g.len();
            parts.push(g);
        }
        if parts.is_empty() {
            parts.push(FiniteGroupoid::cyclic(1));
        }
        FiniteGroupoid::bundle(&parts)
    }
}
