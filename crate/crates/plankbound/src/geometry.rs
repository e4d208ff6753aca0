//! V-represented polytopes and the exact-at-vertex primitives: support
//! functions, directional widths, difference bodies and direction handling.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sphere::{self, SearchConfig};

/// Tolerance for deduplicating vertices and for negation-closure checks.
pub const DEDUP_TOL: f64 = 1e-12;
/// Allowed deviation of a direction from unit norm.
pub const UNIT_TOL: f64 = 1e-12;
/// Relative singular-value threshold of the full-dimensionality check.
pub const RANK_REL_TOL: f64 = 1e-9;

/// A unit vector in R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    coords: DVector<f64>,
}

impl Direction {
    /// Wraps a vector that is already unit length within `UNIT_TOL`.
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = coords.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(Direction { coords })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(v: DVector<f64>) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = v.norm();
        if n < 1e-14 {
            return Err(Error::ZeroVector);
        }
        Ok(Direction { coords: v / n })
    }

    /// The i-th coordinate axis, with sign.
    pub fn axis(dim: usize, i: usize, positive: bool) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = if positive { 1.0 } else { -1.0 };
        Direction { coords: v }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn negated(&self) -> Direction {
        Direction {
            coords: -&self.coords,
        }
    }
}

/// A full-dimensional convex body given by its vertices.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
}

fn validate_vertices(vertices: &[DVector<f64>]) -> Result<usize> {
    let first = vertices.first().ok_or(Error::NoVertices)?;
    let dim = first.len();
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    for v in vertices {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(dim)
}

fn dedup(vertices: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if !kept.iter().any(|k| (k - &v).norm() <= DEDUP_TOL) {
            kept.push(v);
        }
    }
    kept
}

fn check_full_dimensional(vertices: &[DVector<f64>], dim: usize) -> Result<()> {
    if vertices.len() < dim + 1 {
        return Err(Error::NotFullDimensional);
    }
    let base = &vertices[0];
    let rows = vertices.len() - 1;
    let mut m = DMatrix::zeros(rows, dim);
    for (i, v) in vertices.iter().skip(1).enumerate() {
        for j in 0..dim {
            m[(i, j)] = v[j] - base[j];
        }
    }
    let svd = m.svd(false, false);
    let sigma_max = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_REL_TOL * sigma_max)
        .count();
    if rank < dim {
        return Err(Error::NotFullDimensional);
    }
    Ok(())
}

impl Polytope {
    /// Validates, deduplicates and checks full-dimensionality.
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let dim = validate_vertices(&vertices)?;
        let vertices = dedup(vertices);
        check_full_dimensional(&vertices, dim)?;
        Ok(Polytope { dim, vertices })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let vertices = rows
            .iter()
            .map(|r| {
                if r.len() != dim {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        got: r.len(),
                    })
                } else {
                    Ok(DVector::from_row_slice(r))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other,
            });
        }
        Ok(())
    }

    /// Support value of a raw (not necessarily unit) functional.
    pub fn support_raw(&self, x: &DVector<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// First vertex (in list order) attaining the support value.
    pub fn support_argmax(&self, x: &DVector<f64>) -> (usize, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, v) in self.vertices.iter().enumerate() {
            let s = v.dot(x);
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    }

    /// h_K(u): maximum of <v, u> over the vertices.
    pub fn support(&self, u: &Direction) -> Result<f64> {
        self.check_dim(u.dim())?;
        Ok(self.support_raw(u.coords()))
    }

    /// w_K(u) = h_K(u) + h_K(-u).
    pub fn width_in_direction(&self, u: &Direction) -> Result<f64> {
        self.check_dim(u.dim())?;
        Ok(self.support_raw(u.coords()) + self.support_raw(&-u.coords()))
    }

    pub fn translated(&self, c: &DVector<f64>) -> Result<Polytope> {
        self.check_dim(c.len())?;
        Ok(Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v + c).collect(),
        })
    }

    /// Image of the body under x -> Sx + c.
    pub fn transformed(&self, s: &DMatrix<f64>, c: &DVector<f64>) -> Result<Polytope> {
        self.check_dim(s.ncols())?;
        self.check_dim(c.len())?;
        Polytope::new(self.vertices.iter().map(|v| s * v + c).collect())
    }

    /// Componentwise (lo, hi) bounding box.
    pub fn bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for j in 0..self.dim {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }
}

/// An origin-symmetric polytope: the vertex list is closed under negation.
#[derive(Clone, Debug)]
pub struct SymmetricBody {
    poly: Polytope,
}

impl SymmetricBody {
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let poly = Polytope::new(vertices)?;
        SymmetricBody::from_polytope(poly)
    }

    pub fn from_polytope(poly: Polytope) -> Result<Self> {
        for v in poly.vertices() {
            let has_negation = poly
                .vertices()
                .iter()
                .any(|w| (w + v).norm() <= DEDUP_TOL);
            if !has_negation {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(SymmetricBody { poly })
    }

    pub fn as_polytope(&self) -> &Polytope {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        self.poly.vertices()
    }

    pub fn support(&self, u: &Direction) -> Result<f64> {
        self.poly.support(u)
    }

    pub fn width_in_direction(&self, u: &Direction) -> Result<f64> {
        self.poly.width_in_direction(u)
    }

    /// Applies a linear map to every vertex. Negation closure is preserved
    /// bit-exactly because matrix-vector products are sign-symmetric.
    pub fn transformed(&self, t: &DMatrix<f64>) -> Result<SymmetricBody> {
        let vertices: Vec<DVector<f64>> = self.poly.vertices().iter().map(|v| t * v).collect();
        SymmetricBody::new(vertices)
    }
}

/// The difference body L = (K - K) / 2.
///
/// Emits candidate vertices (v_i - v_j)/2 for all pairs; non-extreme
/// candidates are kept since all downstream operations are hull-insensitive.
/// Each candidate is emitted together with its exact IEEE negation, so the
/// output is negation-closed bit for bit.
pub fn difference_body(body: &Polytope) -> Result<SymmetricBody> {
    let n = body.vertices().len();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(n * (n - 1) + 1);
    out.push(DVector::zeros(body.dim()));
    for i in 0..n {
        for j in (i + 1)..n {
            let c = (&body.vertices()[i] - &body.vertices()[j]) * 0.5;
            let close = |x: &DVector<f64>| out.iter().any(|k| (k - x).norm() <= DEDUP_TOL);
            if !close(&c) {
                let neg = -&c;
                out.push(c);
                out.push(neg);
            }
        }
    }
    SymmetricBody::new(out)
}

/// Multistart search for the direction of minimal width. The returned value
/// is an upper bound on the true minimum and always satisfies
/// `value == width_in_direction(body, direction)`.
pub fn min_width(body: &Polytope, search: &SearchConfig) -> Result<(Direction, f64)> {
    let d = body.dim();
    let mut seeds: Vec<Direction> = Vec::with_capacity(search.seeds);
    for i in 0..d {
        seeds.push(Direction::axis(d, i, true));
        seeds.push(Direction::axis(d, i, false));
    }
    let diag = DVector::from_element(d, 1.0);
    seeds.push(Direction::normalized(diag.clone())?);
    let mut alt = diag;
    for j in (1..d).step_by(2) {
        alt[j] = -1.0;
    }
    seeds.push(Direction::normalized(alt)?);
    if seeds.len() < search.seeds {
        seeds.extend(sphere::sphere_directions(d, search.seeds - seeds.len()));
    }
    let (u, _) = sphere::multistart_minimize(&seeds, search, |u| body.width_in_direction(u))?;
    // re-evaluate so the reported pair is self-consistent
    let value = body.width_in_direction(&u)?;
    Ok((u, value))
}
