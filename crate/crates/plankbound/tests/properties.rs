//! Property-based invariants for the geometric primitives.

mod common;

use nalgebra::{DMatrix, DVector};
use plankbound::bounds::{lemma4_bound_check, ratio_closed_form, tangent_construction};
use plankbound::geometry::{difference_body, Direction, Polytope};
use plankbound::lp;
use plankbound::planks::{transform_plank, Plank};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_body(seed: u64, d: usize, extra: usize) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::random_polytope(&mut rng, d, d + 1 + extra)
}

fn unit(coords: Vec<f64>) -> Option<Direction> {
    let v = DVector::from_vec(coords);
    if v.norm() < 1e-6 {
        return None;
    }
    Direction::normalized(v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_subadditive(
        seed in 0u64..32,
        d in 2usize..=3,
        a in proptest::collection::vec(-2.0f64..2.0, 3),
        b in proptest::collection::vec(-2.0f64..2.0, 3),
    ) {
        let body = small_body(seed, d, 4);
        let u = DVector::from_vec(a[..d].to_vec());
        let v = DVector::from_vec(b[..d].to_vec());
        let lhs = body.support_raw(&(&u + &v));
        let rhs = body.support_raw(&u) + body.support_raw(&v);
        prop_assert!(lhs <= rhs + 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn support_is_positively_homogeneous(
        seed in 0u64..32,
        d in 2usize..=3,
        a in proptest::collection::vec(-2.0f64..2.0, 3),
        c in 0.01f64..50.0,
    ) {
        let body = small_body(seed, d, 4);
        let u = DVector::from_vec(a[..d].to_vec());
        let lhs = body.support_raw(&(&u * c));
        let rhs = c * body.support_raw(&u);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn difference_body_preserves_widths(
        seed in 0u64..16,
        d in 2usize..=3,
        a in proptest::collection::vec(-1.0f64..1.0, 3),
    ) {
        let body = small_body(seed, d, 3);
        let Some(u) = unit(a[..d].to_vec()) else { return Ok(()) };
        let l = difference_body(&body).unwrap();
        let wk = body.width_in_direction(&u).unwrap();
        let wl = l.width_in_direction(&u).unwrap();
        prop_assert!((wk - wl).abs() <= 1e-10 * wk.max(1.0));
    }

    #[test]
    fn chord_equals_twice_radial_and_fits_in_width(
        seed in 0u64..16,
        d in 2usize..=3,
        a in proptest::collection::vec(-1.0f64..1.0, 3),
    ) {
        let body = small_body(seed, d, 3);
        let Some(u) = unit(a[..d].to_vec()) else { return Ok(()) };
        let l = difference_body(&body).unwrap();
        let ell = lp::chord_length(&body, &u).unwrap();
        let rho = lp::radial(&l, &u).unwrap();
        prop_assert!((ell - 2.0 * rho).abs() <= 1e-9 * ell.max(1.0));
        let w = body.width_in_direction(&u).unwrap();
        prop_assert!(ell <= w + 1e-9);
    }

    #[test]
    fn radial_is_symmetric(
        seed in 0u64..16,
        d in 2usize..=3,
        a in proptest::collection::vec(-1.0f64..1.0, 3),
    ) {
        let body = small_body(seed, d, 3);
        let Some(u) = unit(a[..d].to_vec()) else { return Ok(()) };
        let l = difference_body(&body).unwrap();
        let fwd = lp::radial(&l, &u).unwrap();
        let bwd = lp::radial(&l, &u.negated()).unwrap();
        prop_assert!((fwd - bwd).abs() <= 1e-10 * fwd.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lemma4_ratio_dominates_bound(r in 1.0f64..10.0, frac in 0.0f64..=1.0) {
        let h = 1.0 + (r - 1.0) * frac;
        let check = lemma4_bound_check(r, h).unwrap();
        prop_assert!(check.slack >= -1e-12);
        prop_assert!((check.ratio - ratio_closed_form(r, h).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn tangent_construction_matches_closed_form(r in 1.0f64..10.0, frac in 0.0f64..1.0) {
        let h = 1.0 + (r - 1.0) * frac;
        if h >= r - 1e-12 {
            return Ok(());
        }
        let y = tangent_construction(r, h).unwrap();
        let want = h * ratio_closed_form(r, h).unwrap();
        prop_assert!((y - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn perfect_square_identity_holds(r in 1.0f64..20.0, t in 0.0f64..20.0) {
        let k = (r * r - 1.0).sqrt();
        let lhs = (r + 1.0) * t * t - 2.0 * k * t + (r - 1.0);
        let root = (r + 1.0).sqrt() * t - (r - 1.0).sqrt();
        prop_assert!((lhs - root * root).abs() <= 1e-10 * (1.0 + r * r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_plank_agrees_pointwise(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        t in -2.0f64..2.0,
        w in 0.05f64..3.0,
        m in proptest::collection::vec(-0.3f64..0.3, 9),
        shift in proptest::collection::vec(-2.0f64..2.0, 3),
        pts in proptest::collection::vec(proptest::collection::vec(-4.0f64..4.0, 3), 20),
    ) {
        let d = 3;
        let Some(normal) = unit(a) else { return Ok(()) };
        let plank = Plank::new(normal, t, w).unwrap();
        // diagonally dominant, hence invertible and well conditioned
        let mut s = DMatrix::from_fn(d, d, |i, j| m[i * d + j]);
        for i in 0..d {
            s[(i, i)] += 1.5;
        }
        let c = DVector::from_vec(shift);
        let image = transform_plank(&plank, &s, &c).unwrap();
        for p in &pts {
            let x = DVector::from_vec(p.clone());
            if plank.margin(&x).abs() < 1e-6 {
                continue; // skip boundary-ambiguous points
            }
            let y = &s * &x + &c;
            prop_assert_eq!(plank.contains(&x), image.contains(&y));
        }
    }
}
