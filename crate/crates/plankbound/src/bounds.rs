//! The quantitative core: the closed-form chord/width ratio bound, its
//! tangent-line construction, the sharpness witness, the minimal
//! chord/width ratio search, and end-to-end certification of plank covers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Polytope, SymmetricBody};
use crate::john::JohnCertificate;
use crate::lp;
use crate::planks::Plank;
use crate::sphere::{self, SearchConfig};

fn check_domain(r: f64, h: f64) -> Result<()> {
    if !(r.is_finite() && h.is_finite()) || h < 1.0 - 1e-12 || h > r + 1e-12 {
        return Err(Error::Lemma4Domain { r, h });
    }
    Ok(())
}

/// y/h = r^2 / (h^2 + h sqrt(r^2-1) sqrt(r^2-h^2)).
///
/// Equals 1 at h = r (degenerate ray case) and is bounded below by
/// 2/(1+r) on the whole domain 1 <= h <= r.
pub fn ratio_closed_form(r: f64, h: f64) -> Result<f64> {
    check_domain(r, h)?;
    let k = (r * r - 1.0).max(0.0).sqrt();
    let s = (r * r - h * h).max(0.0).sqrt();
    Ok(r * r / (h * h + h * k * s))
}

/// Height y at which the tangent from the support point a = (x, h) to the
/// unit disc crosses the vertical axis, with x = sqrt(r^2 - h^2).
///
/// Computed in the rationalized form r^2 / (h + x sqrt(r^2-1)), which is
/// valid on both sides of x = 1 and stable near the branch point. The
/// explicit x = 1 branch y = r^2/(2h) is kept as a cross-check.
pub fn tangent_construction(r: f64, h: f64) -> Result<f64> {
    check_domain(r, h)?;
    if h >= r - 1e-15 {
        return Err(Error::Lemma4Domain { r, h });
    }
    let x = (r * r - h * h).max(0.0).sqrt();
    let k = (r * r - 1.0).max(0.0).sqrt();
    let y = if (x - 1.0).abs() <= 1e-12 {
        r * r / (2.0 * h)
    } else {
        r * r / (h + x * k)
    };
    // the root the derivation selects lies in [1, h] once h > 1
    if h > 1.0 + 1e-12 {
        debug_assert!(y >= 1.0 - 1e-9 && y <= h + 1e-9, "y = {y} outside [1, {h}]");
    }
    Ok(y)
}

/// Ratio, lower bound 2/(1+r) and their slack, with the perfect-square
/// identity re-verified numerically.
#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
}

pub fn lemma4_bound_check(r: f64, h: f64) -> Result<BoundCheck> {
    let ratio = ratio_closed_form(r, h)?;
    let bound = 2.0 / (1.0 + r);
    let t = (r * r - h * h).max(0.0).sqrt() / h;
    let k = (r * r - 1.0).max(0.0).sqrt();
    let quadratic = (r + 1.0) * t * t - 2.0 * k * t + (r - 1.0);
    let square = {
        let root = (r + 1.0).sqrt() * t - (r - 1.0).max(0.0).sqrt();
        root * root
    };
    let residual = (quadratic - square).abs();
    if residual > 1e-10 * (1.0 + r * r) {
        return Err(Error::IdentityCheckFailed { r, h, residual });
    }
    Ok(BoundCheck {
        ratio,
        bound,
        slack: ratio - bound,
    })
}

/// The direction data for which the bound 2/(1+sqrt(d)) is attained on
/// the cube: r = sqrt(d), x = sqrt(r(r-1)/2), h = sqrt(r(r+1)/2).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SharpWitness {
    pub r: f64,
    pub x: f64,
    pub h: f64,
    pub ratio: f64,
}

pub fn sharp_witness(d: usize) -> Result<SharpWitness> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let r = (d as f64).sqrt();
    let x = (r * (r - 1.0) / 2.0).sqrt();
    let h = (r * (r + 1.0) / 2.0).sqrt();
    let ratio = ratio_closed_form(r, h)?;
    Ok(SharpWitness { r, x, h, ratio })
}

/// Minimizes chord/width over the sphere for a body certified to be in
/// John position. For such bodies the value is at least 2/(1+sqrt(d)).
pub fn min_chord_width_ratio(
    body: &SymmetricBody,
    cert: &JohnCertificate,
    search: &SearchConfig,
) -> Result<(Direction, f64)> {
    if cert.inner < 1.0 - 1e-4 {
        return Err(Error::WeakJohnCertificate(cert.inner));
    }
    let seeds = sphere::sphere_directions(body.dim(), search.seeds);
    sphere::multistart_minimize(&seeds, search, |u: &Direction| {
        let ell = lp::chord_length(body.as_polytope(), u)?;
        let w = body.width_in_direction(u)?;
        Ok(ell / w)
    })
}

/// One evaluated plank of a certification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlankRow {
    pub normal: Vec<f64>,
    pub width: f64,
    pub w: f64,
    pub ell: f64,
    pub rw: f64,
    pub width_over_ell: f64,
}

/// The evaluated inequality chain for a (body, cover) pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertReport {
    pub body_id: String,
    pub dimension: usize,
    pub rows: Vec<PlankRow>,
    pub total_rw: f64,
    pub total_width_over_ell: f64,
    pub threshold_bang: f64,
    pub threshold_theorem: f64,
    pub threshold_claim: f64,
    pub pass_bang: bool,
    pub pass_theorem: bool,
    pub pass_claim: bool,
    /// Minimum observed chord/width ratio over the plank normals.
    pub min_ratio: f64,
    pub min_ratio_direction: Vec<f64>,
    /// Which of the three inequalities has the least slack.
    pub tightest: String,
}

/// Slack below a threshold tolerated before an inequality fails.
pub const CERT_TOL: f64 = 1e-9;

/// Evaluates the full inequality chain in the original coordinates:
/// sum width/ell >= 1, sum rw >= 2/(1+sqrt(d)), sum rw >= 1/sqrt(d).
/// Both ratios are affine-invariant, so no normalization is needed here.
pub fn certify_cover_bound(body: &Polytope, planks: &[Plank], body_id: &str) -> Result<CertReport> {
    let d = body.dim();
    let sqrt_d = (d as f64).sqrt();
    let mut rows = Vec::with_capacity(planks.len());
    let mut total_rw = 0.0;
    let mut total_bang = 0.0;
    let mut min_ratio = f64::INFINITY;
    let mut min_dir: Vec<f64> = Vec::new();
    for p in planks {
        let w = body.width_in_direction(p.normal())?;
        let ell = lp::chord_length(body, p.normal())?;
        let rw = p.width() / w;
        let over_ell = p.width() / ell;
        total_rw += rw;
        total_bang += over_ell;
        let ratio = ell / w;
        if ratio < min_ratio {
            min_ratio = ratio;
            min_dir = p.normal().coords().iter().copied().collect();
        }
        rows.push(PlankRow {
            normal: p.normal().coords().iter().copied().collect(),
            width: p.width(),
            w,
            ell,
            rw,
            width_over_ell: over_ell,
        });
    }
    let threshold_theorem = 2.0 / (1.0 + sqrt_d);
    let threshold_claim = 1.0 / sqrt_d;
    let slack_bang = total_bang - 1.0;
    let slack_theorem = total_rw - threshold_theorem;
    let slack_claim = total_rw - threshold_claim;
    let tightest = if slack_bang <= slack_theorem && slack_bang <= slack_claim {
        "bang"
    } else if slack_theorem <= slack_claim {
        "theorem"
    } else {
        "claim"
    };
    Ok(CertReport {
        body_id: body_id.to_string(),
        dimension: d,
        rows,
        total_rw,
        total_width_over_ell: total_bang,
        threshold_bang: 1.0,
        threshold_theorem,
        threshold_claim,
        pass_bang: slack_bang >= -CERT_TOL,
        pass_theorem: slack_theorem >= -CERT_TOL,
        pass_claim: slack_claim >= -CERT_TOL,
        min_ratio,
        min_ratio_direction: min_dir,
        tightest: tightest.to_string(),
    })
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

impl CertReport {
    pub fn all_pass(&self) -> bool {
        self.pass_bang && self.pass_theorem && self.pass_claim
    }

    pub fn failing_inequality(&self) -> Option<&'static str> {
        if !self.pass_bang {
            Some("bang")
        } else if !self.pass_theorem {
            Some("theorem")
        } else if !self.pass_claim {
            Some("claim")
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per plank, followed by a totals/thresholds footer. Floats
    /// use shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("normal,width,w,ell,rw,width_over_ell\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_vec(&r.normal),
                r.width,
                r.w,
                r.ell,
                r.rw,
                r.width_over_ell
            ));
        }
        out.push_str(&format!(
            "totals,,,,{},{}\n",
            self.total_rw, self.total_width_over_ell
        ));
        out.push_str(&format!("threshold_bang,{}\n", self.threshold_bang));
        out.push_str(&format!("threshold_theorem,{}\n", self.threshold_theorem));
        out.push_str(&format!("threshold_claim,{}\n", self.threshold_claim));
        out.push_str(&format!(
            "pass,{},{},{}\n",
            self.pass_bang, self.pass_theorem, self.pass_claim
        ));
        out.push_str(&format!(
            "min_ratio,{},{}\n",
            self.min_ratio,
            fmt_vec(&self.min_ratio_direction)
        ));
        out.push_str(&format!("tightest,{}\n", self.tightest));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::john;
    use crate::planks;
    use nalgebra::DVector;

    #[test]
    fn ratio_degenerate_cases() {
        for r in [1.0, 1.5, 3.0] {
            assert!((ratio_closed_form(r, r).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((ratio_closed_form(1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_sharp_point_hits_bound_exactly() {
        for d in 2..=10 {
            let r = (d as f64).sqrt();
            let h = (r * (r + 1.0) / 2.0).sqrt();
            let got = ratio_closed_form(r, h).unwrap();
            let want = 2.0 / (1.0 + r);
            assert!((got - want).abs() < 1e-12, "d = {d}: {got} vs {want}");
        }
    }

    #[test]
    fn ratio_rejects_domain_violation() {
        assert!(ratio_closed_form(2.0, 0.5).is_err());
        assert!(ratio_closed_form(2.0, 2.5).is_err());
    }

    #[test]
    fn tangent_x_equals_one_branch() {
        // r = sqrt(2), h = 1 gives x = 1 and y = r^2/(2h) = 1
        let y = tangent_construction(2.0f64.sqrt(), 1.0).unwrap();
        assert!((y - 1.0).abs() < 1e-12);
        // r = 2, h = sqrt(3) gives x = 1 and y = 2/sqrt(3)
        let y = tangent_construction(2.0, 3.0f64.sqrt()).unwrap();
        assert!((y - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    /// Independent oracle: find the tangency point b on the unit circle
    /// with <a, b> = 1, then intersect the line through a and b with the
    /// vertical axis and return the crossing height.
    fn tangent_oracle(r: f64, h: f64) -> f64 {
        let x = (r * r - h * h).sqrt();
        let psi = h.atan2(x);
        let delta = (1.0 / r).acos();
        let mut best = f64::NEG_INFINITY;
        for phi in [psi + delta, psi - delta] {
            let b = (phi.cos(), phi.sin());
            // line a + s (b - a); crossing the vertical axis at s with
            // a.x + s (b.x - a.x) = 0
            let denom = b.0 - x;
            if denom.abs() < 1e-14 {
                continue;
            }
            let s = -x / denom;
            let y = h + s * (b.1 - h);
            if y > best && y <= h + 1e-9 && y >= -1e-9 {
                best = y;
            }
        }
        best
    }

    #[test]
    fn tangent_matches_oracle_and_closed_form() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let r = rng.gen_range(1.001..4.0);
            let h = rng.gen_range(1.0..r);
            let y = tangent_construction(r, h).unwrap();
            let cf = ratio_closed_form(r, h).unwrap();
            assert!(
                (y / h - cf).abs() <= 1e-10,
                "r = {r}, h = {h}: y/h = {} vs {}",
                y / h,
                cf
            );
            let oracle = tangent_oracle(r, h);
            assert!(
                (y - oracle).abs() <= 1e-8 * (1.0 + y.abs()),
                "r = {r}, h = {h}: y = {y} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn tangent_stress_band_near_x_equals_one() {
        // sweep x through [1 - 1e-4, 1 + 1e-4] with h fixed
        let h = 1.7f64;
        for i in 0..2000 {
            let x = 1.0 - 1e-4 + 2e-4 * i as f64 / 2000.0;
            let r = (x * x + h * h).sqrt();
            let y = tangent_construction(r, h).unwrap();
            let cf = ratio_closed_form(r, h).unwrap();
            assert!((y / h - cf).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn lemma4_slack_nonnegative_on_sweep() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20_000 {
            let r = rng.gen_range(1.0..10.0);
            let h = rng.gen_range(1.0..=r);
            let chk = lemma4_bound_check(r, h).unwrap();
            assert!(chk.slack >= -1e-12, "r = {r}, h = {h}: slack {}", chk.slack);
        }
    }

    #[test]
    fn lemma4_sharp_point_slack_zero() {
        for d in 2..=10 {
            let r = (d as f64).sqrt();
            let h = (r * (r + 1.0) / 2.0).sqrt();
            let chk = lemma4_bound_check(r, h).unwrap();
            assert!(chk.slack.abs() < 1e-10, "d = {d}: slack {}", chk.slack);
        }
    }

    #[test]
    fn lemma4_h_equals_r_slack() {
        for r in [1.0, 2.0, 5.0] {
            let chk = lemma4_bound_check(r, r).unwrap();
            let want = (r - 1.0) / (r + 1.0);
            assert!((chk.slack - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sharp_witness_values() {
        let w2 = sharp_witness(2).unwrap();
        assert!((w2.r - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((w2.ratio - 2.0 / (1.0 + 2.0f64.sqrt())).abs() < 1e-12);
        assert!((w2.ratio - 0.8284271247461901).abs() < 1e-10);

        let w4 = sharp_witness(4).unwrap();
        assert!((w4.r - 2.0).abs() < 1e-15);
        assert!((w4.x - 1.0).abs() < 1e-12);
        assert!((w4.h - 3.0f64.sqrt()).abs() < 1e-12);
        assert!((w4.ratio - 2.0 / 3.0).abs() < 1e-12);

        let w9 = sharp_witness(9).unwrap();
        assert!((w9.ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sharp_witness_invariants() {
        let mut prev = f64::INFINITY;
        for d in 2..=50 {
            let w = sharp_witness(d).unwrap();
            assert!((w.x * w.x + w.h * w.h - w.r * w.r).abs() <= 1e-12 * w.r * w.r);
            assert!((w.ratio * (1.0 + (d as f64).sqrt()) - 2.0).abs() <= 1e-10);
            // strictly decreasing in d, and better than 2/(1+d)
            assert!(w.ratio < prev);
            assert!(w.ratio > 2.0 / (1.0 + d as f64));
            assert!(w.ratio <= 1.0);
            prev = w.ratio;
        }
    }

    fn cube_body(d: usize) -> SymmetricBody {
        let mut rows = Vec::new();
        for mask in 0..(1usize << d) {
            rows.push(DVector::from_iterator(
                d,
                (0..d).map(|j| if mask >> j & 1 == 1 { 1.0 } else { -1.0 }),
            ));
        }
        SymmetricBody::new(rows).unwrap()
    }

    #[test]
    fn min_ratio_cube_2d() {
        let body = cube_body(2);
        let cert = john::verify_john(&body, 256).unwrap();
        let cfg = SearchConfig {
            seeds: 2048,
            refinements: 32,
            f_tol: 1e-10,
            max_iters: 400,
        };
        let (_, val) = min_chord_width_ratio(&body, &cert, &cfg).unwrap();
        let want = 2.0 / (1.0 + 2.0f64.sqrt());
        assert!((val - want).abs() < 1e-6, "got {val}, want {want}");
    }

    #[test]
    fn min_ratio_disc_like_body() {
        // scaled by sqrt(2) so the unit ball fits inside (John position)
        let s = 2.0f64.sqrt();
        let mut out = Vec::new();
        for k in 0..32 {
            let a = std::f64::consts::PI * k as f64 / 32.0;
            let v = DVector::from_vec(vec![s * a.cos(), s * a.sin()]);
            out.push(v.clone());
            out.push(-v);
        }
        let body = SymmetricBody::new(out).unwrap();
        let cert = john::verify_john(&body, 256).unwrap();
        let cfg = SearchConfig {
            seeds: 1024,
            refinements: 16,
            f_tol: 1e-9,
            max_iters: 300,
        };
        let (_, val) = min_chord_width_ratio(&body, &cert, &cfg).unwrap();
        assert!(val >= 0.998, "got {val}");
    }

    #[test]
    fn min_ratio_requires_certificate() {
        let body = cube_body(2);
        let weak = JohnCertificate {
            inner: 0.5,
            outer: 2.0,
        };
        let cfg = SearchConfig::ratio_default(2);
        assert!(matches!(
            min_chord_width_ratio(&body, &weak, &cfg),
            Err(Error::WeakJohnCertificate(_))
        ));
    }

    fn square() -> Polytope {
        Polytope::from_rows(
            2,
            &[
                vec![1.0, 1.0],
                vec![1.0, -1.0],
                vec![-1.0, 1.0],
                vec![-1.0, -1.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn certify_slab_cover() {
        let planks = planks::slab_cover(&square(), &Direction::axis(2, 0, true), 4).unwrap();
        let rep = certify_cover_bound(&square(), &planks, "square").unwrap();
        assert!(rep.all_pass());
        assert!((rep.total_rw - 1.0).abs() < 1e-12);
        assert!((rep.total_width_over_ell - 1.0).abs() < 1e-12);
        // totals equal the sum of rows
        let sum_rw: f64 = rep.rows.iter().map(|r| r.rw).sum();
        assert!((sum_rw - rep.total_rw).abs() <= 1e-12);
    }

    #[test]
    fn certify_diagonal_slab_cover() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Direction::new(DVector::from_vec(vec![s, s])).unwrap();
        let planks = planks::slab_cover(&square(), &u, 3).unwrap();
        let rep = certify_cover_bound(&square(), &planks, "square-diagonal").unwrap();
        assert!(rep.all_pass());
        assert!((rep.total_rw - 1.0).abs() < 1e-9);
        assert!((rep.total_width_over_ell - 1.0).abs() < 1e-9);
    }

    #[test]
    fn certify_sharp_direction_full_plank() {
        // a single plank in the sharp direction covering the whole square
        let w = sharp_witness(2).unwrap();
        let r = w.r;
        let u = Direction::normalized(DVector::from_vec(vec![w.x / r, w.h / r])).unwrap();
        let width = square().width_in_direction(&u).unwrap();
        let plank = Plank::new(u, 0.0, width).unwrap();
        let rep = certify_cover_bound(&square(), &[plank], "square-sharp").unwrap();
        assert!(rep.all_pass());
        assert!((rep.total_rw - 1.0).abs() < 1e-12);
        // in the sharp direction the chain is tight: ell/w = 2/(1+sqrt 2)
        assert!((rep.min_ratio - w.ratio).abs() < 1e-9);
    }

    #[test]
    fn report_csv_shape() {
        let planks = planks::slab_cover(&square(), &Direction::axis(2, 0, true), 2).unwrap();
        let rep = certify_cover_bound(&square(), &planks, "square").unwrap();
        let csv = rep.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "normal,width,w,ell,rw,width_over_ell");
        assert_eq!(csv.lines().count(), 1 + 2 + 7);
        assert!(csv.contains(&format!("threshold_theorem,{}", 2.0 / (1.0 + 2.0f64.sqrt()))));
    }
}
