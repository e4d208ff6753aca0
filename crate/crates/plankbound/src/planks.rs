//! Planks, relative widths, cover generation and cover verification.
//!
//! Cover verification is deliberately one-sided: a `Counterexample` is a
//! rigorous refutation (the witness passes exact membership and exact
//! plank arithmetic), while `Covered` is a sampling-based verdict.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Direction, Polytope};
use crate::lp::{self, Membership};
use crate::sphere;

/// A closed slab {x : |<x, normal> - translation| <= width/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct Plank {
    normal: Direction,
    translation: f64,
    width: f64,
}

impl Plank {
    pub fn new(normal: Direction, translation: f64, width: f64) -> Result<Self> {
        if !translation.is_finite() || !width.is_finite() {
            return Err(Error::NonFinite);
        }
        if width < 0.0 {
            return Err(Error::NegativeWidth(width));
        }
        Ok(Plank {
            normal,
            translation,
            width,
        })
    }

    pub fn normal(&self) -> &Direction {
        &self.normal
    }

    pub fn translation(&self) -> f64 {
        self.translation
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Signed distance of x outside the plank; nonpositive inside.
    pub fn margin(&self, x: &DVector<f64>) -> f64 {
        (x.dot(self.normal.coords()) - self.translation).abs() - self.width / 2.0
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.margin(x) <= 0.0
    }
}

/// rw_K(P) = width(P) / w_K(u).
pub fn relative_width(plank: &Plank, body: &Polytope) -> Result<f64> {
    let w = body.width_in_direction(plank.normal())?;
    Ok(plank.width() / w)
}

/// Sum of relative widths over a plank list.
pub fn total_relative_width(planks: &[Plank], body: &Polytope) -> Result<f64> {
    let mut total = 0.0;
    for p in planks {
        total += relative_width(p, body)?;
    }
    Ok(total)
}

/// Sum of width(P_i) / ell_K(u_i); at least 1 whenever the planks cover
/// the body.
pub fn bang_functional(planks: &[Plank], body: &Polytope) -> Result<f64> {
    let mut total = 0.0;
    for p in planks {
        let ell = lp::chord_length(body, p.normal())?;
        total += p.width() / ell;
    }
    Ok(total)
}

/// Image of a plank under x -> Sx + c. The returned plank's membership
/// predicate agrees pointwise with the image set.
pub fn transform_plank(plank: &Plank, s: &DMatrix<f64>, c: &DVector<f64>) -> Result<Plank> {
    let s_inv_t = s
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?
        .transpose();
    let v = &s_inv_t * plank.normal().coords();
    let scale = v.norm();
    if scale < 1e-14 {
        return Err(Error::SingularMatrix);
    }
    let normal = Direction::normalized(v.clone())?;
    let translation = (plank.translation() + c.dot(&v)) / scale;
    let width = plank.width() / scale;
    Plank::new(normal, translation, width)
}

/// Partition of the body's extent in direction u into m contiguous slabs
/// of equal width; total relative width is exactly 1.
pub fn slab_cover(body: &Polytope, u: &Direction, m: usize) -> Result<Vec<Plank>> {
    assert!(m >= 1, "slab count must be at least 1");
    let hi = body.support(u)?;
    let lo = -body.support(&u.negated())?;
    let w = (hi - lo) / m as f64;
    (0..m)
        .map(|i| {
            let center = lo + (i as f64 + 0.5) * w;
            Plank::new(u.clone(), center, w)
        })
        .collect()
}

/// Sampling and refinement budget for `covers`.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Low-discrepancy samples drawn from the bounding box.
    pub samples: usize,
    /// Local refinement rounds applied to the best uncovered candidate.
    pub rounds: usize,
    /// Margins at or below this count as covered.
    pub tol: f64,
}

impl VerifyConfig {
    pub fn for_dimension(dim: usize) -> Self {
        VerifyConfig {
            samples: 20_000 * dim,
            rounds: 3,
            tol: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleStats {
    pub points_tested: usize,
    pub refinement_rounds: usize,
}

/// Verdict of the cover check.
#[derive(Clone, Debug)]
pub enum CoverVerdict {
    Covered {
        best_margin: f64,
        stats: SampleStats,
    },
    Counterexample {
        witness: DVector<f64>,
        margin: f64,
        stats: SampleStats,
    },
}

impl CoverVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverVerdict::Covered { .. })
    }
}

fn cover_margin(planks: &[Plank], x: &DVector<f64>) -> f64 {
    planks
        .iter()
        .map(|p| p.margin(x))
        .fold(f64::INFINITY, f64::min)
}

/// Searches for a point of the body outside every plank.
///
/// Samples: all vertices and pairwise vertex midpoints (inside the body by
/// construction) plus a deterministic Halton sample of the bounding box,
/// lazily screened by membership LPs in descending-margin order. The best
/// uncovered candidate is then improved by projected coordinate ascent.
pub fn covers(planks: &[Plank], body: &Polytope, cfg: &VerifyConfig) -> Result<CoverVerdict> {
    if planks.is_empty() {
        return Err(Error::NoPlanks);
    }
    let d = body.dim();
    for p in planks {
        if p.normal().dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.normal().dim(),
            });
        }
    }

    // points known to lie in the body
    let mut known: Vec<DVector<f64>> = body.vertices().to_vec();
    let verts = body.vertices();
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            known.push((&verts[i] + &verts[j]) * 0.5);
        }
    }
    if known.is_empty() {
        return Err(Error::NoInteriorSamples);
    }

    let mut best: Option<(f64, DVector<f64>)> = None;
    for k in &known {
        let m = cover_margin(planks, k);
        if best.as_ref().map_or(true, |(bm, _)| m > *bm) {
            best = Some((m, k.clone()));
        }
    }
    let (mut best_margin, mut best_point) = best.expect("known set is nonempty");

    // bounding-box Halton samples, screened lazily
    let (lo, hi) = body.bounding_box();
    let bases = {
        let mut b = Vec::new();
        let mut n = 2u64;
        while b.len() < d {
            if b.iter().all(|p| n % p != 0) {
                b.push(n);
            }
            n += 1;
        }
        b
    };
    let mut candidates: Vec<(f64, usize, DVector<f64>)> = (0..cfg.samples)
        .map(|i| {
            let mut x = DVector::zeros(d);
            for k in 0..d {
                let u = sphere::halton((i + 1) as u64, bases[k]);
                x[k] = lo[k] + u * (hi[k] - lo[k]);
            }
            let m = cover_margin(planks, &x);
            (m, i, x)
        })
        .collect();
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut tested = known.len();
    // descending-margin chunks: the first in-body hit in a chunk dominates
    // everything that follows, so the scan can stop there
    const CHUNK: usize = 256;
    'scan: for chunk in candidates.chunks(CHUNK) {
        if chunk[0].0 <= best_margin.max(cfg.tol) {
            break;
        }
        let eligible: Vec<&(f64, usize, DVector<f64>)> = chunk
            .iter()
            .filter(|(m, _, _)| *m > best_margin.max(cfg.tol))
            .collect();
        tested += eligible.len();
        let inside: Vec<bool> = eligible
            .par_iter()
            .map(|(_, _, x)| Ok(lp::membership(body, x)?.is_inside()))
            .collect::<Result<Vec<_>>>()?;
        for (cand, ok) in eligible.iter().zip(inside) {
            if ok {
                best_margin = cand.0;
                best_point = cand.2.clone();
                break 'scan;
            }
        }
    }

    let mut rounds_used = 0usize;
    if best_margin > cfg.tol {
        // local refinement: projected coordinate ascent with membership
        // re-checks, shrinking steps each round
        let diag = (&hi - &lo).norm();
        for round in 0..cfg.rounds {
            rounds_used += 1;
            let base_step = diag / 20.0 / 4f64.powi(round as i32);
            for k in 0..d {
                for sign in [1.0, -1.0] {
                    let mut step = base_step;
                    for _ in 0..4 {
                        let mut x = best_point.clone();
                        x[k] += sign * step;
                        let m = cover_margin(planks, &x);
                        if m > best_margin && lp::membership(body, &x)?.is_inside() {
                            best_margin = m;
                            best_point = x;
                            break;
                        }
                        step *= 0.5;
                    }
                }
            }
        }
    }

    let stats = SampleStats {
        points_tested: tested,
        refinement_rounds: rounds_used,
    };
    if best_margin <= cfg.tol {
        Ok(CoverVerdict::Covered {
            best_margin,
            stats,
        })
    } else {
        // the witness must survive exact membership
        match lp::membership(body, &best_point)? {
            Membership::Inside { .. } => Ok(CoverVerdict::Counterexample {
                witness: best_point,
                margin: best_margin,
                stats,
            }),
            Membership::Outside { .. } => Ok(CoverVerdict::Covered {
                best_margin: cfg.tol,
                stats,
            }),
        }
    }
}
