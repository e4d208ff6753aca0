//! Deterministic direction sets on the unit sphere and derivative-free
//! minimization of functions of a direction.
//!
//! Direction seeds come from a Halton sequence pushed through the inverse
//! normal CDF and normalized, which gives a reproducible low-discrepancy
//! covering of the sphere in any dimension. Local refinement runs
//! Nelder-Mead in a tangent chart so the simplex never degenerates along
//! the radial direction.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::Direction;

/// Search budget shared by the sphere-minimization entry points.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Number of deterministic seed directions.
    pub seeds: usize,
    /// How many of the best seeds get Nelder-Mead refinement.
    pub refinements: usize,
    /// Convergence tolerance on the function value.
    pub f_tol: f64,
    /// Iteration cap per refinement.
    pub max_iters: usize,
}

impl SearchConfig {
    /// Defaults for the directional-width search: coordinate directions,
    /// diagonals and low-discrepancy fill, all refined.
    pub fn min_width_default(dim: usize) -> Self {
        let seeds = 2 * dim * dim.div_ceil(2) + 32;
        SearchConfig {
            seeds,
            refinements: seeds,
            f_tol: 1e-9,
            max_iters: 500,
        }
    }

    /// Defaults for chord/width ratio scans.
    pub fn ratio_default(dim: usize) -> Self {
        SearchConfig {
            seeds: 4096 * dim,
            refinements: 64,
            f_tol: 1e-9,
            max_iters: 500,
        }
    }
}

/// Radical-inverse of `index` in the given base, in [0, 1).
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().all(|p| n % p != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Acklam's rational approximation of the standard normal quantile.
/// Absolute error below 1.2e-9, plenty for seeding a direction set.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let p = p.clamp(1e-300, 1.0 - 1e-16);
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Deterministic low-discrepancy direction set of the requested size.
pub fn sphere_directions(dim: usize, count: usize) -> Vec<Direction> {
    let bases = primes(dim);
    (0..count)
        .map(|i| {
            let mut v = DVector::zeros(dim);
            for (k, &base) in bases.iter().enumerate() {
                let u = halton((i + 1) as u64, base).clamp(1e-12, 1.0 - 1e-12);
                v[k] = inverse_normal_cdf(u);
            }
            if v.norm() < 1e-9 {
                v[0] = 1.0;
            }
            Direction::normalized(v).expect("nonzero by construction")
        })
        .collect()
}

/// Orthonormal basis of the tangent space at `u` (d-1 vectors).
fn tangent_basis(u: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = u.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    for k in 0..d {
        let mut t = DVector::zeros(d);
        t[k] = 1.0;
        t -= u * u[k];
        for b in &basis {
            let proj = b.dot(&t);
            t -= b * proj;
        }
        let n = t.norm();
        if n > 1e-8 {
            basis.push(t / n);
        }
        if basis.len() == d - 1 {
            break;
        }
    }
    basis
}

fn chart_point(center: &DVector<f64>, basis: &[DVector<f64>], z: &[f64]) -> Direction {
    let mut v = center.clone();
    for (b, &zi) in basis.iter().zip(z) {
        v += b * zi;
    }
    if v.norm() < 1e-12 {
        v = center.clone();
    }
    Direction::normalized(v).expect("chart point has positive norm")
}

/// Nelder-Mead minimization of `f` over the sphere, started at `start`.
/// Works in the tangent chart at the start point.
pub fn nelder_mead_sphere<F>(
    f: &F,
    start: &Direction,
    f_tol: f64,
    max_iters: usize,
) -> Result<(Direction, f64)>
where
    F: Fn(&Direction) -> Result<f64>,
{
    let center = start.coords().clone();
    let basis = tangent_basis(&center);
    let n = basis.len();
    if n == 0 {
        let v = f(start)?;
        return Ok((start.clone(), v));
    }

    let eval = |z: &[f64]| -> Result<(Direction, f64)> {
        let dir = chart_point(&center, &basis, z);
        let v = f(&dir)?;
        Ok((dir, v))
    };

    // simplex of n+1 points in chart coordinates
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let z0 = vec![0.0; n];
    simplex.push((z0.clone(), eval(&z0)?.1));
    for k in 0..n {
        let mut z = z0.clone();
        z[k] = 0.1;
        let v = eval(&z)?.1;
        simplex.push((z, v));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if (simplex[n].1 - simplex[0].1).abs() <= f_tol {
            break;
        }
        // centroid of all but the worst
        let mut c = vec![0.0; n];
        for (z, _) in simplex.iter().take(n) {
            for k in 0..n {
                c[k] += z[k] / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let refl: Vec<f64> = (0..n).map(|k| c[k] + alpha * (c[k] - worst.0[k])).collect();
        let f_refl = eval(&refl)?.1;
        if f_refl < simplex[0].1 {
            let exp: Vec<f64> = (0..n).map(|k| c[k] + gamma * (refl[k] - c[k])).collect();
            let f_exp = eval(&exp)?.1;
            if f_exp < f_refl {
                simplex[n] = (exp, f_exp);
            } else {
                simplex[n] = (refl, f_refl);
            }
        } else if f_refl < simplex[n - 1].1 {
            simplex[n] = (refl, f_refl);
        } else {
            let con: Vec<f64> = (0..n).map(|k| c[k] + rho * (worst.0[k] - c[k])).collect();
            let f_con = eval(&con)?.1;
            if f_con < worst.1 {
                simplex[n] = (con, f_con);
            } else {
                // shrink toward the best point
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let z: Vec<f64> = (0..n)
                        .map(|k| best[k] + sigma * (item.0[k] - best[k]))
                        .collect();
                    let v = eval(&z)?.1;
                    *item = (z, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    eval(&simplex[0].0)
}

fn lex_less(a: &Direction, b: &Direction) -> bool {
    for (x, y) in a.coords().iter().zip(b.coords().iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Take the better of two candidates; equal values break toward the
/// lexicographically smallest direction.
fn better(a: (Direction, f64), b: (Direction, f64)) -> (Direction, f64) {
    if b.1 < a.1 || (b.1 == a.1 && lex_less(&b.0, &a.0)) {
        b
    } else {
        a
    }
}

/// Multistart minimization over the sphere: evaluate all seeds, refine the
/// best ones with Nelder-Mead, and return the overall minimum with a
/// deterministic tie-break.
pub fn multistart_minimize<F>(
    seeds: &[Direction],
    cfg: &SearchConfig,
    f: F,
) -> Result<(Direction, f64)>
where
    F: Fn(&Direction) -> Result<f64> + Sync,
{
    assert!(!seeds.is_empty(), "seed set must be nonempty");
    let seed_vals: Vec<f64> = seeds
        .par_iter()
        .map(|u| f(u))
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&i, &j| {
        seed_vals[i]
            .partial_cmp(&seed_vals[j])
            .unwrap()
            .then(i.cmp(&j))
    });

    let n_refine = cfg.refinements.min(seeds.len());
    let refined: Vec<(Direction, f64)> = order[..n_refine]
        .par_iter()
        .map(|&i| nelder_mead_sphere(&f, &seeds[i], cfg.f_tol, cfg.max_iters))
        .collect::<Result<Vec<_>>>()?;

    let mut best = (seeds[order[0]].clone(), seed_vals[order[0]]);
    for cand in refined {
        best = better(best, cand);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_base2_prefix() {
        let want = [0.5, 0.25, 0.75, 0.125, 0.625];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(halton(i as u64 + 1, 2), *w);
        }
    }

    #[test]
    fn inverse_normal_cdf_symmetry_and_median() {
        assert!(inverse_normal_cdf(0.5).abs() < 1e-12);
        for p in [0.01, 0.1, 0.3, 0.45] {
            let a = inverse_normal_cdf(p);
            let b = inverse_normal_cdf(1.0 - p);
            assert!((a + b).abs() < 1e-8, "p = {p}: {a} vs {b}");
        }
        assert!((inverse_normal_cdf(0.975) - 1.959964).abs() < 1e-5);
    }

    #[test]
    fn sphere_directions_are_unit() {
        for d in 2..=6 {
            for u in sphere_directions(d, 100) {
                assert!((u.coords().norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_directions_cover_all_orthants_in_2d() {
        let dirs = sphere_directions(2, 256);
        let mut seen = [false; 4];
        for u in &dirs {
            let c = u.coords();
            let idx = (if c[0] >= 0.0 { 0 } else { 1 }) + (if c[1] >= 0.0 { 0 } else { 2 });
            seen[idx] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn nelder_mead_finds_axis_minimum() {
        // f(u) = -u_x has its sphere minimum at u = e1.
        let f = |u: &Direction| -> Result<f64> { Ok(-u.coords()[0]) };
        let start = Direction::normalized(DVector::from_vec(vec![0.8, 0.6])).unwrap();
        let (dir, val) = nelder_mead_sphere(&f, &start, 1e-12, 500).unwrap();
        assert!((val + 1.0).abs() < 1e-6);
        assert!((dir.coords()[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn multistart_is_deterministic() {
        let f = |u: &Direction| -> Result<f64> {
            let c = u.coords();
            Ok(c[0] * c[0] - c[1])
        };
        let seeds = sphere_directions(3, 64);
        let cfg = SearchConfig {
            seeds: 64,
            refinements: 8,
            f_tol: 1e-10,
            max_iters: 300,
        };
        let a = multistart_minimize(&seeds, &cfg, f).unwrap();
        let b = multistart_minimize(&seeds, &cfg, f).unwrap();
        assert_eq!(a.1, b.1);
        assert_eq!(a.0.coords(), b.0.coords());
    }
}
