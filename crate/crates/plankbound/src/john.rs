//! Minimum-volume enclosing ellipsoid of a centered point set and John
//! normalization of symmetric bodies.
//!
//! The MVEE solver is the centered (symmetric) Khachiyan multiplicative
//! weights scheme with Wolfe-Atwood away steps, stopping once the maximum
//! Mahalanobis norm drops to d(1+eps). With shape matrix A = M^{-1}/d the
//! enclosing guarantee is p'Ap <= 1 + eps for every input point, while
//! the weighted-scatter duality gives {x : x'Ax <= 1/d} inside the hull,
//! which is exactly John's sandwich after rescaling.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{Direction, SymmetricBody};
use crate::lp;
use crate::sphere::{self, SearchConfig};

/// Centered ellipsoid {x : x'Ax <= 1} with A symmetric positive definite.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    a: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: a.ncols(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let eig = a.clone().symmetric_eigen();
        if eig.eigenvalues.min() <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Ellipsoid { a })
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// x'Ax.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.a * x)[(0, 0)]
    }

    pub fn contains(&self, x: &DVector<f64>, slack: f64) -> bool {
        self.quadratic_form(x) <= 1.0 + slack
    }

    /// Principal square root of the shape matrix.
    pub fn shape_sqrt(&self) -> Result<DMatrix<f64>> {
        let eig = self.a.clone().symmetric_eigen();
        let lambda_max = eig.eigenvalues.max();
        if eig.eigenvalues.min() < 1e-12 * lambda_max {
            return Err(Error::NotPositiveDefinite);
        }
        let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        Ok(&eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose())
    }
}

/// Minimum-volume enclosing ellipsoid of a centered (negation-closed)
/// point set, to relative volume accuracy (1+eps)^d.
pub fn mvee(points: &[DVector<f64>], eps: f64) -> Result<Ellipsoid> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::BadEpsilon(eps));
    }
    let n = points.len();
    let first = points.first().ok_or(Error::NoVertices)?;
    let d = first.len();
    if n < d {
        return Err(Error::RankDeficient);
    }

    let df = d as f64;
    let cap = (100.0 * df / eps) as u64;
    let mut weights = vec![1.0 / n as f64; n];
    let mut iterations = 0u64;

    loop {
        // weighted scatter M = sum w_i p_i p_i'
        let mut m = DMatrix::zeros(d, d);
        for (w, p) in weights.iter().zip(points) {
            if *w > 0.0 {
                m.syger(*w, p, p, 1.0);
            }
        }
        m.fill_upper_triangle_with_lower_triangle();
        let chol = m.clone().cholesky().ok_or(Error::RankDeficient)?;
        let inv = chol.inverse();

        let mut kappa_max = f64::NEG_INFINITY;
        let mut i_max = 0usize;
        let mut kappa_min = f64::INFINITY;
        let mut i_min = usize::MAX;
        for (i, p) in points.iter().enumerate() {
            let k = (p.transpose() * &inv * p)[(0, 0)];
            if k > kappa_max {
                kappa_max = k;
                i_max = i;
            }
            if weights[i] > 1e-14 && k < kappa_min {
                kappa_min = k;
                i_min = i;
            }
        }

        if kappa_max <= df * (1.0 + eps) {
            let a = inv / df;
            return Ellipsoid::new(a);
        }

        iterations += 1;
        if iterations > cap {
            return Err(Error::MveeIterationLimit(cap));
        }

        let (j, kappa) = if kappa_max - df >= df - kappa_min || i_min == usize::MAX {
            (i_max, kappa_max)
        } else {
            (i_min, kappa_min)
        };
        let alpha = if j == i_max {
            (kappa - df) / (df * (kappa - 1.0))
        } else {
            // away step: shrink the weight of the least-stressed support
            // point, dropping it entirely when the line search says so
            let lower = -weights[j] / (1.0 - weights[j]);
            if kappa > 1.0 + 1e-12 {
                ((kappa - df) / (df * (kappa - 1.0))).max(lower)
            } else {
                lower
            }
        };

        for w in weights.iter_mut() {
            *w *= 1.0 - alpha;
        }
        weights[j] += alpha;
        if weights[j] < 1e-18 {
            weights[j] = 0.0;
        }
    }
}

/// Certified sandwich data for a symmetric body: inner radial lower bound
/// over a direction sweep and the exact maximum vertex norm.
#[derive(Clone, Copy, Debug)]
pub struct JohnCertificate {
    pub inner: f64,
    pub outer: f64,
}

/// Output of John normalization: the linear map, the transformed body and
/// the verified sandwich certificate.
#[derive(Clone, Debug)]
pub struct JohnNormalization {
    pub transform: DMatrix<f64>,
    pub body: SymmetricBody,
    pub certificate: JohnCertificate,
}

/// Direction budget used by `john_normalize` when re-verifying its output.
pub const NORMALIZE_VERIFY_DIRECTIONS: usize = 512;
/// Inner radius below this fails normalization (signals eps too loose).
pub const INNER_FAIL_THRESHOLD: f64 = 1.0 - 1e-4;

/// Brings a symmetric body into John position: computes the MVEE of the
/// vertex set, maps it onto the ball of radius sqrt(d), and certifies
/// B subset TL subset sqrt(d) B by a direction sweep.
pub fn john_normalize(body: &SymmetricBody, eps: f64) -> Result<JohnNormalization> {
    let d = body.dim();
    let ell = mvee(body.vertices(), eps)?;
    let transform = ell.shape_sqrt()? * (d as f64).sqrt();
    let normalized = body.transformed(&transform)?;
    let certificate = verify_john(&normalized, NORMALIZE_VERIFY_DIRECTIONS)?;
    if certificate.inner < INNER_FAIL_THRESHOLD {
        return Err(Error::NormalizationFailed {
            inner: certificate.inner,
            threshold: INNER_FAIL_THRESHOLD,
        });
    }
    Ok(JohnNormalization {
        transform,
        body: normalized,
        certificate,
    })
}

/// Measures the John sandwich: outer radius is the exact maximum vertex
/// norm; the inner radius is the minimum of the radial function over a
/// deterministic direction set plus multistart local minimization.
pub fn verify_john(body: &SymmetricBody, directions: usize) -> Result<JohnCertificate> {
    let d = body.dim();
    let outer = body
        .vertices()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    let seeds = sphere::sphere_directions(d, directions.max(2 * d));
    let cfg = SearchConfig {
        seeds: seeds.len(),
        refinements: 16,
        f_tol: 1e-9,
        max_iters: 200,
    };
    let (_, inner) = sphere::multistart_minimize(&seeds, &cfg, |u: &Direction| {
        lp::radial(body, u)
    })?;
    Ok(JohnCertificate { inner, outer })
}
