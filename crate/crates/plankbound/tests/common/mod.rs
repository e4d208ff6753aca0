#![allow(dead_code)]

use nalgebra::DVector;
use plankbound::geometry::{Direction, Polytope};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn cube(d: usize, half: f64) -> Polytope {
    let rows: Vec<Vec<f64>> = (0..1usize << d)
        .map(|mask| {
            (0..d)
                .map(|j| if mask >> j & 1 == 1 { half } else { -half })
                .collect()
        })
        .collect();
    Polytope::from_rows(d, &rows).unwrap()
}

pub fn square() -> Polytope {
    cube(2, 1.0)
}

pub fn regular_polygon(n: usize) -> Polytope {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    Polytope::from_rows(2, &rows).unwrap()
}

/// Random full-dimensional polytope: a scaled simplex frame plus uniform
/// points in [-1,1]^d, `n` vertices total (n >= d + 1).
pub fn random_polytope(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Polytope {
    assert!(n >= d + 1);
    let mut verts: Vec<DVector<f64>> = Vec::with_capacity(n);
    verts.push(DVector::from_element(d, -0.9));
    for i in 0..d {
        let mut v = DVector::from_element(d, -0.9);
        v[i] = 0.9;
        verts.push(v);
    }
    while verts.len() < n {
        verts.push(DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0)));
    }
    Polytope::new(verts).unwrap()
}

pub fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Direction {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() > 1e-6 {
            return Direction::normalized(v).unwrap();
        }
    }
}

/// The 50-body corpus used by several acceptance criteria:
/// dimensions 2..=5, 8 to 40 vertices, deterministic.
pub fn corpus(rng: &mut ChaCha8Rng) -> Vec<Polytope> {
    let mut out = Vec::with_capacity(50);
    for i in 0..50 {
        let d = 2 + i % 4;
        let n = rng.gen_range(8..=40);
        out.push(random_polytope(rng, d, n));
    }
    out
}
