//! Predicates on grid matrices, the checkerboard extension and its verifiers,
//! and Spearman's rho.
//!
//! Every predicate returns a [`Check`] carrying the labels of the violated
//! rows of the corresponding family system, so a failure can be traced to a
//! specific inequality.

use thiserror::Error;

use crate::exact::Rational;
use crate::families::{build_cdq, build_dc, build_dq, build_udc, Form, Space};
use crate::polytope::HRep;
use crate::transforms::GridMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CopulaOpsError {
    #[error("query ({0}, {1}) lies outside the unit square")]
    OutOfRange(Rational, Rational),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Outcome of a predicate: `ok` iff `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl Check {
    fn from_violations(violations: Vec<String>) -> Self {
        Check { ok: violations.is_empty(), violations }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionQuery {
    pub u: Rational,
    pub v: Rational,
}

impl ExtensionQuery {
    pub fn new(u: Rational, v: Rational) -> Result<Self, CopulaOpsError> {
        let unit = |t: &Rational| !t.is_negative() && *t <= Rational::one();
        if unit(&u) && unit(&v) {
            Ok(ExtensionQuery { u, v })
        } else {
            Err(CopulaOpsError::OutOfRange(u, v))
        }
    }
}

fn check_against(h: &HRep, g: &GridMatrix) -> Check {
    let x = g.to_point();
    Check::from_violations(h.iter().filter(|(c, _)| !c.is_satisfied(&x)).map(|(_, l)| l.to_string()).collect())
}

fn grid_system(g: &GridMatrix, build: fn(usize, usize, Space, Form) -> Result<HRep, crate::families::FamilyError>, form: Form) -> Check {
    match build(g.p(), g.q(), Space::Grid, form) {
        Ok(h) => check_against(&h, g),
        Err(e) => Check::from_violations(vec![e.to_string()]),
    }
}

/// Boundary and supermodularity.
pub fn is_discrete_copula(g: &GridMatrix) -> Check {
    grid_system(g, build_dc, Form::Defining)
}

/// Membership in the ultramodular family through its minimal system.
pub fn is_ultramodular(g: &GridMatrix) -> Check {
    grid_system(g, build_udc, Form::Minimal)
}

pub fn is_quasi(g: &GridMatrix) -> Check {
    grid_system(g, build_dq, Form::Defining)
}

pub fn is_convex_quasi(g: &GridMatrix) -> Check {
    grid_system(g, build_cdq, Form::Minimal)
}

/// Locates `t` in cells of width `1/n`: returns `(cell, lambda)` with the last
/// cell closed on the right.
fn locate(t: &Rational, n: usize) -> (usize, Rational) {
    let scaled = t * Rational::from(n as i64);
    let floor = scaled.numer() / scaled.denom();
    let k: usize = floor.try_into().expect("query inside the unit square");
    let k = k.min(n - 1);
    let lambda = scaled - Rational::from(k as i64);
    (k, lambda)
}

/// Bilinear interpolation of `g` on the cell containing the query.
pub fn checkerboard_eval(g: &GridMatrix, query: &ExtensionQuery) -> Rational {
    let (i, lu) = locate(&query.u, g.p());
    let (j, mv) = locate(&query.v, g.q());
    let one = Rational::one();
    let (au, av) = (&one - &lu, &one - &mv);
    &au * &av * g.c(i, j) + &au * &mv * g.c(i, j + 1) + &lu * &av * g.c(i + 1, j) + &lu * &mv * g.c(i + 1, j + 1)
}

/// The extension sampled on the grid of mesh `1/(p r) x 1/(q r)`. Because the
/// breakpoints `i/p`, `j/q` are grid nodes, convexity and slope bounds of the
/// piecewise-bilinear extension are decided exactly by this table.
fn refined_table(g: &GridMatrix, r: usize) -> Vec<Vec<Rational>> {
    let (nu, nv) = (g.p() * r, g.q() * r);
    (0..=nu)
        .map(|a| {
            (0..=nv)
                .map(|b| {
                    let q = ExtensionQuery {
                        u: Rational::frac(a as i64, nu as i64),
                        v: Rational::frac(b as i64, nv as i64),
                    };
                    checkerboard_eval(g, &q)
                })
                .collect()
        })
        .collect()
}

fn sections_convex(t: &[Vec<Rational>]) -> bool {
    let (nu, nv) = (t.len(), t[0].len());
    let two = Rational::from(2i64);
    let horizontal = (0..nv).all(|b| (1..nu - 1).all(|a| &t[a - 1][b] + &t[a + 1][b] >= &two * &t[a][b]));
    let vertical = (0..nu).all(|a| (1..nv - 1).all(|b| &t[a][b - 1] + &t[a][b + 1] >= &two * &t[a][b]));
    horizontal && vertical
}

/// Jensen midpoint test on every horizontal and vertical section.
pub fn verify_extension_ultramodular(g: &GridMatrix, refinement: usize) -> Result<bool, CopulaOpsError> {
    let check = is_ultramodular(g);
    if !check.ok {
        return Err(CopulaOpsError::PreconditionFailed(format!("not ultramodular: {}", check.violations.join(", "))));
    }
    Ok(sections_convex(&refined_table(g, refinement.max(1))))
}

/// Boundary, monotonicity, 1-Lipschitz and section convexity of the extension.
pub fn verify_extension_quasi(g: &GridMatrix, refinement: usize) -> Result<bool, CopulaOpsError> {
    let check = is_convex_quasi(g);
    if !check.ok {
        return Err(CopulaOpsError::PreconditionFailed(format!("not a convex quasi-copula: {}", check.violations.join(", "))));
    }
    let r = refinement.max(1);
    let t = refined_table(g, r);
    let (nu, nv) = (g.p() * r, g.q() * r);
    let (hu, hv) = (Rational::frac(1, nu as i64), Rational::frac(1, nv as i64));

    let boundary = (0..=nu).all(|a| t[a][0].is_zero() && t[a][nv] == Rational::frac(a as i64, nu as i64))
        && (0..=nv).all(|b| t[0][b].is_zero() && t[nu][b] == Rational::frac(b as i64, nv as i64));
    // Steps along grid lines bound the partial derivatives everywhere, and the
    // l1-Lipschitz property for arbitrary pairs follows by the triangle inequality.
    let steps_u = (0..nu).all(|a| {
        (0..=nv).all(|b| {
            let d = &t[a + 1][b] - &t[a][b];
            !d.is_negative() && d <= hu
        })
    });
    let steps_v = (0..=nu).all(|a| {
        (0..nv).all(|b| {
            let d = &t[a][b + 1] - &t[a][b];
            !d.is_negative() && d <= hv
        })
    });
    Ok(boundary && steps_u && steps_v && sections_convex(&t))
}

/// `12 * integral of the extension - 3`, exact.
pub fn spearman_rho(g: &GridMatrix) -> Result<Rational, CopulaOpsError> {
    if !is_discrete_copula(g).ok && !is_quasi(g).ok {
        return Err(CopulaOpsError::PreconditionFailed("neither a discrete copula nor a quasi-copula".into()));
    }
    Ok(rho_unchecked(g))
}

pub(crate) fn rho_unchecked(g: &GridMatrix) -> Rational {
    let (p, q) = (g.p(), g.q());
    let mut sum = Rational::zero();
    for i in 0..p {
        for j in 0..q {
            sum += g.c(i, j) + g.c(i + 1, j) + g.c(i, j + 1) + g.c(i + 1, j + 1);
        }
    }
    sum * Rational::frac(3, (p * q) as i64) - Rational::from(3i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates_on_bounds() {
        for g in [GridMatrix::pi(3, 3), GridMatrix::w(3, 3)] {
            assert!(is_discrete_copula(&g).ok);
            assert!(is_ultramodular(&g).ok);
        }
        let m = GridMatrix::m(3, 3);
        assert!(is_discrete_copula(&m).ok);
        assert!(!is_ultramodular(&m).ok);
        assert!(matches!(verify_extension_ultramodular(&m, 2), Err(CopulaOpsError::PreconditionFailed(_))));
    }

    #[test]
    fn evaluation() {
        let w = GridMatrix::w(2, 2);
        let half = Rational::frac(1, 2);
        assert!(checkerboard_eval(&w, &ExtensionQuery::new(half.clone(), half.clone()).unwrap()).is_zero());
        let pi = GridMatrix::pi(3, 4);
        let (u, v) = (Rational::frac(2, 7), Rational::frac(5, 9));
        assert_eq!(checkerboard_eval(&pi, &ExtensionQuery::new(u.clone(), v.clone()).unwrap()), &u * &v);
        assert!(ExtensionQuery::new(Rational::from(2i64), half).is_err());
    }

    #[test]
    fn rho_values() {
        assert!(spearman_rho(&GridMatrix::pi(4, 4)).unwrap().is_zero());
        assert_eq!(spearman_rho(&GridMatrix::m(2, 2)).unwrap(), Rational::frac(3, 4));
        assert_eq!(spearman_rho(&GridMatrix::w(2, 2)).unwrap(), Rational::frac(-3, 4));
    }
}
