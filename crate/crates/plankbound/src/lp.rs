//! Dense two-phase simplex with Bland's anti-cycling rule, plus the
//! LP-backed geometric queries: membership, radial function and chord
//! length on V-represented bodies.
//!
//! Standard form: maximize c'x subject to Ax = b, x >= 0. Problem sizes
//! here are at most a few hundred variables, so a dense tableau is the
//! simplest fully deterministic choice.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Polytope, SymmetricBody};

/// No improving reduced cost above this means optimal.
pub const REDUCED_COST_TOL: f64 = 1e-10;
/// Absolute residual allowed on the returned primal.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Entries below this are never used as pivots.
const PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct LpProblem {
    /// Objective to maximize.
    pub objective: DVector<f64>,
    /// Equality constraint matrix.
    pub constraints: DMatrix<f64>,
    /// Right-hand side.
    pub rhs: DVector<f64>,
}

impl LpProblem {
    pub fn new(objective: DVector<f64>, constraints: DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        if constraints.ncols() != objective.len() {
            return Err(Error::DimensionMismatch {
                expected: constraints.ncols(),
                got: objective.len(),
            });
        }
        if constraints.nrows() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: constraints.nrows(),
                got: rhs.len(),
            });
        }
        if objective.iter().any(|x| !x.is_finite())
            || constraints.iter().any(|x| !x.is_finite())
            || rhs.iter().any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(LpProblem {
            objective,
            constraints,
            rhs,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective for `Optimal`; the phase-1 infeasibility gap for
    /// `Infeasible`.
    pub value: f64,
    pub primal: DVector<f64>,
}

struct Tableau {
    t: DMatrix<f64>, // m x (n + m + 1): structural | artificial | rhs
    reduced: Vec<f64>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
    pivots: u64,
    cap: u64,
}

enum LoopOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let cols = self.rhs_col() + 1;
        let piv = self.t[(pr, pc)];
        for j in 0..cols {
            self.t[(pr, j)] /= piv;
        }
        for i in 0..self.m {
            if i == pr {
                continue;
            }
            let factor = self.t[(i, pc)];
            if factor != 0.0 {
                for j in 0..cols {
                    self.t[(i, j)] -= factor * self.t[(pr, j)];
                }
            }
        }
        let factor = self.reduced[pc];
        if factor != 0.0 {
            for j in 0..self.rhs_col() {
                self.reduced[j] -= factor * self.t[(pr, j)];
            }
        }
        self.basis[pr] = pc;
    }

    /// Bland's rule: smallest eligible entering column, ties in the ratio
    /// test broken by the smallest basic variable index.
    fn run<F>(&mut self, allowed: F) -> Result<LoopOutcome>
    where
        F: Fn(usize) -> bool,
    {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..rhs).find(|&j| allowed(j) && self.reduced[j] > REDUCED_COST_TOL);
            let Some(pc) = entering else {
                return Ok(LoopOutcome::Optimal);
            };
            let mut pr: Option<usize> = None;
            for i in 0..self.m {
                let a = self.t[(i, pc)];
                if a > PIVOT_TOL {
                    match pr {
                        None => pr = Some(i),
                        Some(r) => {
                            let ratio_i = self.t[(i, rhs)] / a;
                            let ratio_r = self.t[(r, rhs)] / self.t[(r, pc)];
                            if ratio_i < ratio_r
                                || (ratio_i == ratio_r && self.basis[i] < self.basis[r])
                            {
                                pr = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(pr) = pr else {
                return Ok(LoopOutcome::Unbounded);
            };
            self.pivot(pr, pc);
            self.pivots += 1;
            if self.pivots > self.cap {
                return Err(Error::LpIterationLimit(self.cap));
            }
        }
    }
}

/// Two-phase dense simplex. Deterministic: repeated solves of the same
/// problem return bit-identical results.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let m = p.constraints.nrows();
    let n = p.constraints.ncols();
    let cap = 10u64 * ((m + n) as u64) * ((m + n) as u64);

    let mut t = DMatrix::zeros(m, n + m + 1);
    for i in 0..m {
        let sign = if p.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = sign * p.constraints[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = sign * p.rhs[i];
    }

    // phase 1: maximize -(sum of artificials); reduced costs after pricing
    // out the all-artificial basis are the column sums for structural
    // columns and zero for artificial ones.
    let mut reduced = vec![0.0f64; n + m];
    for (j, r) in reduced.iter_mut().enumerate().take(n) {
        *r = (0..m).map(|i| t[(i, j)]).sum();
    }
    let mut tab = Tableau {
        t,
        reduced,
        basis: (n..n + m).collect(),
        n,
        m,
        pivots: 0,
        cap,
    };

    match tab.run(|_| true)? {
        LoopOutcome::Optimal => {}
        LoopOutcome::Unbounded => unreachable!("phase-1 objective is bounded above by zero"),
    }

    let rhs = tab.rhs_col();
    let infeasibility: f64 = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .map(|i| tab.t[(i, rhs)])
        .sum();
    if infeasibility > FEASIBILITY_TOL {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            value: infeasibility,
            primal: DVector::zeros(n),
        });
    }

    // drive artificials out of the basis where possible; rows that cannot
    // be cleared are redundant and their artificial stays basic at zero
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[(i, j)].abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
        }
    }

    // phase 2: rebuild reduced costs from the real objective
    for j in 0..n {
        let mut r = p.objective[j];
        for i in 0..m {
            let b = tab.basis[i];
            if b < n {
                r -= p.objective[b] * tab.t[(i, j)];
            }
        }
        tab.reduced[j] = r;
    }
    for j in n..n + m {
        tab.reduced[j] = 0.0;
    }

    match tab.run(|j| j < n)? {
        LoopOutcome::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            value: f64::INFINITY,
            primal: DVector::zeros(n),
        }),
        LoopOutcome::Optimal => {
            let mut x = DVector::zeros(n);
            for i in 0..m {
                if tab.basis[i] < n {
                    x[tab.basis[i]] = tab.t[(i, rhs)];
                }
            }
            let residual = (&p.constraints * &x - &p.rhs).amax();
            // scale the tolerance with the data so large tableaus are not
            // rejected for ordinary accumulated round-off
            let scale = 1.0 + p.rhs.amax() + p.constraints.amax() * x.amax();
            if residual > FEASIBILITY_TOL * scale {
                return Err(Error::LpResidual(residual));
            }
            let value = p.objective.dot(&x);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                value,
                primal: x,
            })
        }
    }
}

/// Result of a point-membership query.
#[derive(Clone, Debug)]
pub enum Membership {
    /// Barycentric weights over the vertex list reproducing the point.
    Inside { weights: DVector<f64> },
    /// LP infeasibility gap of the barycentric system.
    Outside { infeasibility: f64 },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Decides p in conv(vertices) by LP feasibility of
/// sum(lambda_i v_i) = p, sum(lambda_i) = 1, lambda >= 0.
pub fn membership(body: &Polytope, p: &DVector<f64>) -> Result<Membership> {
    let d = body.dim();
    if p.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.len(),
        });
    }
    let n = body.vertices().len();
    let mut a = DMatrix::zeros(d + 1, n);
    for (j, v) in body.vertices().iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = v[i];
        }
        a[(d, j)] = 1.0;
    }
    let mut b = DVector::zeros(d + 1);
    for i in 0..d {
        b[i] = p[i];
    }
    b[d] = 1.0;
    let sol = solve_lp(&LpProblem::new(DVector::zeros(n), a, b)?)?;
    match sol.status {
        LpStatus::Optimal => Ok(Membership::Inside {
            weights: sol.primal,
        }),
        LpStatus::Infeasible => Ok(Membership::Outside {
            infeasibility: sol.value,
        }),
        LpStatus::Unbounded => Err(Error::LpNotOptimal {
            context: "membership",
            status: "unbounded",
        }),
    }
}

/// Radial function of a symmetric body: the largest t with t*u inside.
pub fn radial(body: &SymmetricBody, u: &Direction) -> Result<f64> {
    let d = body.dim();
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.dim(),
        });
    }
    let n = body.vertices().len();
    // variables: lambda_1..lambda_n, t
    let mut a = DMatrix::zeros(d + 1, n + 1);
    for (j, v) in body.vertices().iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = v[i];
        }
        a[(d, j)] = 1.0;
    }
    for i in 0..d {
        a[(i, n)] = -u.coords()[i];
    }
    let mut b = DVector::zeros(d + 1);
    b[d] = 1.0;
    let mut c = DVector::zeros(n + 1);
    c[n] = 1.0;
    let sol = solve_lp(&LpProblem::new(c, a, b)?)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        other => Err(Error::LpNotOptimal {
            context: "radial",
            status: other.as_str(),
        }),
    }
}

/// Chord length: the largest t such that x - y = t*u with x, y in the body.
pub fn chord_length(body: &Polytope, u: &Direction) -> Result<f64> {
    let d = body.dim();
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.dim(),
        });
    }
    let n = body.vertices().len();
    // variables: lambda (n), mu (n), t
    let cols = 2 * n + 1;
    let mut a = DMatrix::zeros(d + 2, cols);
    for (j, v) in body.vertices().iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = v[i];
            a[(i, n + j)] = -v[i];
        }
        a[(d, j)] = 1.0;
        a[(d + 1, n + j)] = 1.0;
    }
    for i in 0..d {
        a[(i, 2 * n)] = -u.coords()[i];
    }
    let mut b = DVector::zeros(d + 2);
    b[d] = 1.0;
    b[d + 1] = 1.0;
    let mut c = DVector::zeros(cols);
    c[2 * n] = 1.0;
    let sol = solve_lp(&LpProblem::new(c, a, b)?)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        other => Err(Error::LpNotOptimal {
            context: "chord_length",
            status: other.as_str(),
        }),
    }
}
