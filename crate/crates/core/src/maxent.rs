//! Maximum-entropy densities inside a family polytope.
//!
//! The family system and the moment constraints are assembled exactly in the
//! normalized coordinates `z = x / s` (`s` is the total mass, `pq` for the
//! copula families), the equalities are eliminated exactly, and an exact LP
//! certifies a strictly interior start. The rest is floating point: damped
//! Newton on `t * sum z log z - sum log(slack)` over the reduced coordinates,
//! increasing `t` until the barrier gap is below tolerance. Nonnegativity rows
//! are left to the entropy itself and never enter the barrier.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{solve_rows, LeRow, LpResult, Rational, Sense};
use crate::families::{Family, FamilyError, FamilySpec, Space};
use crate::polytope::{reduce, ConstraintKind, HRep, LinConstraint, PolytopeError};
use crate::transforms::DensityMatrix;

#[derive(Debug, Error)]
pub enum MaxEntError {
    #[error("the constraints are infeasible")]
    Infeasible,
    #[error("the feasible region has no strictly positive relative interior point")]
    NoInterior,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("unsupported problem: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `coeffs . z + offset` on normalized densities (row-major, entries sum to 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFunctional {
    pub coeffs: Vec<Rational>,
    pub offset: Rational,
}

impl LinearFunctional {
    pub fn evaluate(&self, z: &[Rational]) -> Rational {
        crate::exact::dot(&self.coeffs, z) + &self.offset
    }

    pub fn evaluate_f64(&self, z: &[f64]) -> f64 {
        self.coeffs.iter().zip(z).map(|(c, z)| c.to_f64() * z).sum::<f64>() + self.offset.to_f64()
    }

    /// Evaluates on a density in the `pq` scaling.
    pub fn evaluate_density(&self, d: &DensityMatrix) -> Rational {
        let s = Rational::frac(1, (d.p() * d.q()) as i64);
        let z: Vec<Rational> = d.to_point().iter().map(|x| x * &s).collect();
        self.evaluate(&z)
    }
}

/// Spearman's rho of the checkerboard extension as a functional of the
/// normalized density.
pub fn rho_functional(p: usize, q: usize) -> LinearFunctional {
    // rho = sum_ij w_ij c_ij - 3 with w_ij = 3 n_ij / (pq), where n_ij counts
    // the cells touching node (i, j), and c is the cumulative sum of z.
    let weight = |i: usize, j: usize| {
        let ni = if i == 0 || i == p { 1 } else { 2 };
        let nj = if j == 0 || j == q { 1 } else { 2 };
        Rational::frac(3 * ni * nj, (p * q) as i64)
    };
    let mut coeffs = Vec::with_capacity(p * q);
    for l in 1..=p {
        for h in 1..=q {
            let mut s = Rational::zero();
            for i in l..=p {
                for j in h..=q {
                    s += weight(i, j);
                }
            }
            coeffs.push(s);
        }
    }
    LinearFunctional { coeffs, offset: Rational::from(-3i64) }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentConstraint {
    pub functional: LinearFunctional,
    pub target: f64,
}

#[derive(Clone, Debug)]
pub struct MaxEntProblem {
    pub family: FamilySpec,
    pub moments: Vec<MomentConstraint>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl MaxEntProblem {
    pub fn new(family: FamilySpec) -> Self {
        MaxEntProblem { family, moments: Vec::new(), tolerance: 1e-8, max_iterations: 100_000 }
    }

    pub fn with_rho_target(mut self, target: f64) -> Self {
        let (p, q) = (self.family.p, self.family.q);
        self.moments.push(MomentConstraint { functional: rho_functional(p, q), target });
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxEntSolution {
    pub p: usize,
    pub q: usize,
    /// Total mass `s`; the density in family units is `s * density`.
    pub scale: f64,
    /// Normalized density, row-major.
    pub density: Vec<f64>,
    pub entropy: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
}

impl MaxEntSolution {
    /// Largest violation of a row of `h` (family units) at the solution after
    /// rounding every entry to the nearest rational with denominator <= 10^9.
    pub fn audit(&self, h: &HRep) -> f64 {
        let x: Vec<Rational> = self
            .density
            .iter()
            .map(|z| Rational::approximate(z * self.scale, 1_000_000_000).unwrap_or_else(Rational::zero))
            .collect();
        h.constraints()
            .iter()
            .map(|c| {
                let lhs = crate::exact::dot(&c.coeffs, &x);
                let gap = match c.kind {
                    ConstraintKind::Le => lhs - &c.rhs,
                    ConstraintKind::Ge => &c.rhs - lhs,
                    ConstraintKind::Eq => (lhs - &c.rhs).abs(),
                };
                gap.to_f64().max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

fn total_mass(spec: &FamilySpec) -> Result<Rational, MaxEntError> {
    match spec.family {
        Family::Transport | Family::AltTransport | Family::UdcMargins | Family::CdqMargins => {
            let u = spec.u.as_ref().ok_or(FamilyError::MissingMargins)?;
            Ok(u.iter().cloned().sum())
        }
        Family::Saf | Family::Asa => Err(MaxEntError::Unsupported("cumulative families have no density form".into())),
        _ => Ok(Rational::from((spec.p * spec.q) as i64)),
    }
}

fn is_nonnegativity(c: &LinConstraint) -> bool {
    let (a, b) = c.as_le();
    b.is_zero() && c.kind != ConstraintKind::Eq && a.iter().filter(|x| !x.is_zero()).count() == 1 && a.iter().any(Rational::is_negative)
}

/// System in `z`: the family rows rescaled, the moments, and `z >= 0`.
fn normalized_system(problem: &MaxEntProblem, s: &Rational) -> Result<HRep, MaxEntError> {
    let h = problem.family.build()?;
    let n = h.dim();
    let mut hz = HRep::new(n);
    for (c, l) in h.iter() {
        hz.push(LinConstraint::new(c.coeffs.iter().map(|a| a * s).collect(), c.rhs.clone(), c.kind)?, l);
    }
    for (k, m) in problem.moments.iter().enumerate() {
        if m.functional.coeffs.len() != n {
            return Err(PolytopeError::DimensionMismatch { expected: n, found: m.functional.coeffs.len() }.into());
        }
        let target = Rational::approximate(m.target, 1_000_000_000)
            .ok_or_else(|| MaxEntError::Unsupported(format!("non-finite target {}", m.target)))?;
        hz.push(LinConstraint::eq(m.functional.coeffs.clone(), target - &m.functional.offset)?, format!("moment{k}"));
    }
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        hz.push(LinConstraint::ge(e, Rational::zero())?, format!("z{k}"));
    }
    Ok(hz)
}

struct Barrier {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

struct Reduced {
    x0: DVector<f64>,
    n: DMatrix<f64>,
    barrier: Barrier,
}

impl Reduced {
    fn z(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.x0 + &self.n * y
    }

    fn slack(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.barrier.b - &self.barrier.a * y
    }

    /// Change of the barrier objective from `y0` to `y1`, summed termwise to
    /// keep precision at large `t`; `None` if `y1` leaves the domain.
    fn change(&self, t: f64, y0: &DVector<f64>, y1: &DVector<f64>) -> Option<f64> {
        let (z0, z1) = (self.z(y0), self.z(y1));
        let (s0, s1) = (self.slack(y0), self.slack(y1));
        if z1.iter().any(|&v| v <= 0.0) || s1.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let ent: f64 = z0.iter().zip(z1.iter()).map(|(a, b)| b * b.ln() - a * a.ln()).sum();
        let bar: f64 = s0.iter().zip(s1.iter()).map(|(a, b)| ((b - a) / a).ln_1p()).sum();
        Some(t * ent - bar)
    }

    fn entropy_gradient(&self, y: &DVector<f64>) -> DVector<f64> {
        let z = self.z(y);
        self.n.tr_mul(&z.map(|v| v.max(1e-300).ln() + 1.0))
    }

    fn grad_hess(&self, t: f64, y: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let z = self.z(y);
        let sl = self.slack(y);
        let mut g = self.entropy_gradient(y) * t;
        let scaled = DMatrix::from_fn(self.n.nrows(), self.n.ncols(), |i, j| self.n[(i, j)] / z[i].max(1e-300).sqrt());
        let mut hess = scaled.tr_mul(&scaled) * t;
        for r in 0..self.barrier.a.nrows() {
            let a = self.barrier.a.row(r).transpose();
            g += &a / sl[r];
            hess += &a * a.transpose() / (sl[r] * sl[r]);
        }
        (g, hess)
    }
}

fn newton_step(g: &DVector<f64>, h: DMatrix<f64>) -> Option<DVector<f64>> {
    let neg = -g;
    match h.clone().cholesky() {
        Some(c) => Some(c.solve(&neg)),
        None => h.lu().solve(&neg),
    }
}

fn entropy(z: &[f64]) -> f64 {
    -z.iter().map(|&v| if v > 0.0 { v * v.ln() } else { 0.0 }).sum::<f64>()
}

pub fn solve_maxent(problem: &MaxEntProblem) -> Result<MaxEntSolution, MaxEntError> {
    if problem.family.space != Space::Density {
        return Err(MaxEntError::Unsupported("maxent works on density-space systems".into()));
    }
    if !(problem.tolerance > 0.0) {
        return Err(MaxEntError::Unsupported("tolerance must be positive".into()));
    }
    let s = total_mass(&problem.family)?;
    let hz = normalized_system(problem, &s)?;
    let red = match reduce(&hz) {
        Ok(r) => r,
        Err(PolytopeError::EmptyPolytope) => return Err(MaxEntError::Infeasible),
        Err(e) => return Err(e.into()),
    };
    let dim = hz.dim();
    let k = red.chart.reduced_dim();
    let x0 = red.chart.lift(&vec![Rational::zero(); k]);
    let ones = vec![Rational::one(); dim];
    let sum_row = red.chart.pull_back(&ones).0;
    if sum_row.iter().any(|c| !c.is_zero()) {
        return Err(MaxEntError::Unsupported("total mass is not fixed by the constraints".into()));
    }

    // Strict interior start: maximize the common slack.
    let mut lp_rows: Vec<LeRow> = red
        .rows
        .iter()
        .map(|r| LeRow { coeffs: r.coeffs.iter().cloned().chain(std::iter::once(Rational::one())).collect(), rhs: r.rhs.clone() })
        .collect();
    let mut cap = vec![Rational::zero(); k + 1];
    cap[k] = Rational::one();
    lp_rows.push(LeRow { coeffs: cap.clone(), rhs: Rational::one() });
    let y_start = match solve_rows(&cap, &lp_rows, k + 1, Sense::Max) {
        LpResult::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(k);
            point
        }
        LpResult::Optimal { value, .. } if value.is_zero() => return Err(MaxEntError::NoInterior),
        LpResult::Optimal { .. } | LpResult::Infeasible => return Err(MaxEntError::Infeasible),
        LpResult::Unbounded => unreachable!("slack is capped"),
    };
    let uniform = vec![Rational::frac(1, dim as i64); dim];
    let uniform_ok = hz.iter().all(|(c, _)| c.is_satisfied(&uniform))
        && red.rows.iter().all(|r| crate::exact::dot(&r.coeffs, &red.chart.project(&uniform)) < r.rhs);
    let y_start = if uniform_ok { red.chart.project(&uniform) } else { y_start };

    let n_mat = DMatrix::from_fn(dim, k, |i, j| {
        let mut e = vec![Rational::zero(); k];
        e[j] = Rational::one();
        (&red.chart.lift(&e)[i] - &x0[i]).to_f64()
    });
    let barrier_rows: Vec<_> = red.rows.iter().filter(|r| !is_nonnegativity(&hz.constraints()[r.source])).collect();
    let barrier = Barrier {
        a: DMatrix::from_fn(barrier_rows.len(), k, |i, j| barrier_rows[i].coeffs[j].to_f64()),
        b: DVector::from_iterator(barrier_rows.len(), barrier_rows.iter().map(|r| r.rhs.to_f64())),
    };
    let sys = Reduced { x0: DVector::from_iterator(dim, x0.iter().map(Rational::to_f64)), n: n_mat, barrier };
    let m = barrier_rows.len() as f64;

    let mut y = DVector::from_iterator(k, y_start.iter().map(Rational::to_f64));
    let mut t = 1.0;
    let mut iterations = 0;
    'outer: loop {
        for _ in 0..200 {
            let (g, h) = sys.grad_hess(t, &y);
            let Some(d) = newton_step(&g, h) else { break };
            let decrement = -g.dot(&d);
            if decrement <= 1e-20 {
                break;
            }
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-12 {
                let cand = &y + &d * alpha;
                // Near the centre the decrease is below f64 resolution at large
                // `t`, so a full step is taken on the decrement alone.
                let accept = match sys.change(t, &y, &cand) {
                    Some(df) => df <= -0.25 * alpha * decrement || (alpha == 1.0 && decrement < 0.1),
                    None => false,
                };
                if accept {
                    y = cand;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            iterations += 1;
            if iterations >= problem.max_iterations {
                break 'outer;
            }
            if !moved {
                break;
            }
        }
        if m == 0.0 || m / t <= 0.5 * problem.tolerance {
            break;
        }
        t *= 10.0;
    }

    let z = sys.z(&y);
    let residual_grad = if m == 0.0 {
        sys.entropy_gradient(&y).amax()
    } else {
        let (g, _) = sys.grad_hess(t, &y);
        g.amax() / t + m / t
    };
    let zs: Vec<f64> = z.iter().copied().collect();
    let residual_eq = hz
        .iter()
        .filter(|(c, _)| c.kind == ConstraintKind::Eq)
        .map(|(c, _)| (c.coeffs.iter().zip(&zs).map(|(a, z)| a.to_f64() * z).sum::<f64>() - c.rhs.to_f64()).abs())
        .fold(0.0, f64::max);
    let kkt_residual = residual_grad + residual_eq;
    if kkt_residual > problem.tolerance {
        return Err(MaxEntError::NotConverged { iterations, residual: kkt_residual });
    }
    Ok(MaxEntSolution {
        p: problem.family.p,
        q: problem.family.q,
        scale: s.to_f64(),
        entropy: entropy(&zs),
        density: zs,
        kkt_residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Form;
    use crate::transforms::{apply_t, GridMatrix};

    fn birkhoff(p: usize) -> FamilySpec {
        FamilySpec::new(Family::Birkhoff, p, p, Space::Density, Form::Defining)
    }

    #[test]
    fn rho_functional_matches_grid_rho() {
        let f = rho_functional(3, 3);
        for g in [GridMatrix::pi(3, 3), GridMatrix::w(3, 3), GridMatrix::m(3, 3)] {
            let d = apply_t(&g).unwrap();
            assert_eq!(f.evaluate_density(&d), crate::copula_ops::spearman_rho(&g).unwrap());
        }
    }

    #[test]
    fn uniform_without_moments() {
        let sol = solve_maxent(&MaxEntProblem::new(birkhoff(3))).unwrap();
        assert!(sol.density.iter().all(|z| (z - 1.0 / 9.0).abs() < 1e-12));
        assert!((sol.entropy - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rho_target_is_met() {
        let sol = solve_maxent(&MaxEntProblem::new(birkhoff(3)).with_rho_target(0.5)).unwrap();
        assert!((rho_functional(3, 3).evaluate_f64(&sol.density) - 0.5).abs() < 1e-9);
        assert!(sol.entropy < 9f64.ln());
        assert!(matches!(
            solve_maxent(&MaxEntProblem::new(birkhoff(3)).with_rho_target(0.95)),
            Err(MaxEntError::Infeasible)
        ));
    }
}
