//! Exact two-phase simplex.
//!
//! A problem `max c.x subject to a_k.x <= b_k` with free `x` is solved through
//! its dual `min b.l subject to A^T l = c, l >= 0`, which is already in standard
//! form. The primal optimum is read back from the dual simplex multipliers.
//! Pivoting follows Bland's rule throughout.

use serde::{Deserialize, Serialize};

use super::rational::{dot, Rational};
use super::ExactError;
use crate::polytope::{ConstraintKind, HRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }
}

/// One `a.x <= b` row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Rows of `h` as `<=` rows (equalities become two rows).
pub fn le_rows(h: &HRep) -> Vec<LeRow> {
    let mut out = Vec::with_capacity(h.constraints().len());
    for c in h.constraints() {
        let neg = || LeRow { coeffs: c.coeffs.iter().map(|x| -x).collect(), rhs: -&c.rhs };
        match c.kind {
            ConstraintKind::Le => out.push(LeRow { coeffs: c.coeffs.clone(), rhs: c.rhs.clone() }),
            ConstraintKind::Ge => out.push(neg()),
            ConstraintKind::Eq => {
                out.push(LeRow { coeffs: c.coeffs.clone(), rhs: c.rhs.clone() });
                out.push(neg());
            }
        }
    }
    out
}

/// Optimizes `objective . x` over the polyhedron `h`.
pub fn lp_solve(objective: &[Rational], h: &HRep, sense: Sense) -> Result<LpResult, ExactError> {
    if objective.len() != h.dim() {
        return Err(ExactError::DimensionMismatch { expected: h.dim(), found: objective.len() });
    }
    Ok(solve_rows(objective, &le_rows(h), h.dim(), sense))
}

/// Optimizes over an explicit list of `<=` rows in `dim` free variables.
pub fn solve_rows(objective: &[Rational], rows: &[LeRow], dim: usize, sense: Sense) -> LpResult {
    match sense {
        Sense::Max => maximize(objective, rows, dim),
        Sense::Min => {
            let neg: Vec<Rational> = objective.iter().map(|x| -x).collect();
            match maximize(&neg, rows, dim) {
                LpResult::Optimal { value, point } => LpResult::Optimal { value: -value, point },
                other => other,
            }
        }
    }
}

fn maximize(c: &[Rational], rows: &[LeRow], n: usize) -> LpResult {
    match DualTableau::solve(c, rows, n) {
        DualOutcome::Optimal { value, point } => LpResult::Optimal { value, point },
        DualOutcome::DualUnbounded => LpResult::Infeasible,
        DualOutcome::DualInfeasible => {
            // primal is infeasible or unbounded; a zero objective decides which
            let zero = vec![Rational::zero(); n];
            match DualTableau::solve(&zero, rows, n) {
                DualOutcome::Optimal { .. } => LpResult::Unbounded,
                _ => LpResult::Infeasible,
            }
        }
    }
}

enum DualOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    DualInfeasible,
    DualUnbounded,
}

struct DualTableau {
    /// `n` rows over `m` dual columns, `n` artificial columns and the rhs.
    t: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    m: usize,
    n: usize,
}

impl DualTableau {
    fn solve(c: &[Rational], rows: &[LeRow], n: usize) -> DualOutcome {
        let m = rows.len();
        let width = m + n + 1;
        let mut signs = vec![1i32; n];
        let mut t = Vec::with_capacity(n);
        for i in 0..n {
            let flip = c[i].is_negative();
            signs[i] = if flip { -1 } else { 1 };
            let mut row = vec![Rational::zero(); width];
            for (k, r) in rows.iter().enumerate() {
                let a = &r.coeffs[i];
                if !a.is_zero() {
                    row[k] = if flip { -a } else { a.clone() };
                }
            }
            row[m + i] = Rational::one();
            row[width - 1] = if flip { -&c[i] } else { c[i].clone() };
            t.push(row);
        }
        let basis = (m..m + n).collect();
        let mut tab = DualTableau { t, obj: vec![Rational::zero(); width], basis, m, n };

        // phase 1: minimize the sum of artificials
        let mut cost = vec![Rational::zero(); width];
        for j in m..m + n {
            cost[j] = Rational::one();
        }
        tab.set_objective(&cost);
        tab.run(m + n);
        if !tab.obj[width - 1].is_zero() {
            return DualOutcome::DualInfeasible;
        }
        tab.evict_artificials();

        // phase 2: the dual objective b.l; artificials may no longer enter
        let mut cost = vec![Rational::zero(); width];
        for (k, r) in rows.iter().enumerate() {
            cost[k] = r.rhs.clone();
        }
        tab.set_objective(&cost);
        if !tab.run(m) {
            return DualOutcome::DualUnbounded;
        }
        let value = -&tab.obj[width - 1];
        let point: Vec<Rational> = (0..n)
            .map(|i| {
                let y = -&tab.obj[m + i];
                if signs[i] < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect();
        debug_assert!(rows.iter().all(|r| dot(&r.coeffs, &point) <= r.rhs));
        debug_assert_eq!(dot(c, &point), value);
        DualOutcome::Optimal { value, point }
    }

    fn rhs(&self) -> usize {
        self.m + self.n
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        self.obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in self.obj.iter_mut().zip(&self.t[i]) {
                if !v.is_zero() {
                    *o -= cb * v;
                }
            }
        }
    }

    /// Bland's rule iterations over entering columns `< allowed`.
    /// Returns false if the objective is unbounded below.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.t.iter().enumerate() {
                let a = &row[col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.t[r][col].recip().expect("pivot entry is nonzero");
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.t[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &j in &nz {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.t[r] = pivot_row;
        self.basis[r] = col;
    }

    /// Pivots artificials out of the basis after phase 1; rows that cannot be
    /// cleared are linearly dependent and dropped.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] >= self.m {
                if let Some(j) = (0..self.m).find(|&j| !self.t[i][j].is_zero()) {
                    self.pivot(i, j);
                } else {
                    self.t.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{HRep, LinConstraint};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn interval() -> HRep {
        let mut h = HRep::new(1);
        h.push(LinConstraint::ge(vec![r(1)], r(0)).unwrap(), "lo");
        h.push(LinConstraint::le(vec![r(1)], r(1)).unwrap(), "hi");
        h
    }

    #[test]
    fn maximize_on_interval() {
        let res = lp_solve(&[r(1)], &interval(), Sense::Max).unwrap();
        assert_eq!(res, LpResult::Optimal { value: r(1), point: vec![r(1)] });
        let res = lp_solve(&[r(1)], &interval(), Sense::Min).unwrap();
        assert_eq!(res.value(), Some(&r(0)));
    }

    #[test]
    fn infeasible_system() {
        let mut h = HRep::new(1);
        h.push(LinConstraint::ge(vec![r(1)], r(0)).unwrap(), "a");
        h.push(LinConstraint::ge(vec![r(1)], r(1)).unwrap(), "b");
        h.push(LinConstraint::ge(vec![r(-1)], r(0)).unwrap(), "c");
        assert_eq!(lp_solve(&[r(1)], &h, Sense::Max).unwrap(), LpResult::Infeasible);
    }

    #[test]
    fn unbounded_and_empty_rows() {
        let mut h = HRep::new(2);
        h.push(LinConstraint::ge(vec![r(1), r(0)], r(0)).unwrap(), "x");
        assert_eq!(lp_solve(&[r(1), r(0)], &h, Sense::Max).unwrap(), LpResult::Unbounded);
        assert_eq!(lp_solve(&[r(0), r(1)], &h, Sense::Max).unwrap(), LpResult::Unbounded);
        let res = lp_solve(&[r(-1), r(0)], &h, Sense::Max).unwrap();
        assert_eq!(res.value(), Some(&r(0)));
        let free = HRep::new(2);
        assert_eq!(lp_solve(&[r(0), r(0)], &free, Sense::Max).unwrap().value(), Some(&r(0)));
        assert_eq!(lp_solve(&[r(0), r(1)], &free, Sense::Max).unwrap(), LpResult::Unbounded);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            lp_solve(&[r(1), r(2)], &interval(), Sense::Max),
            Err(ExactError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equality_and_degenerate_rows() {
        // x + y = 1, x, y >= 0, duplicated rows; max 2x + y
        let mut h = HRep::new(2);
        h.push(LinConstraint::eq(vec![r(1), r(1)], r(1)).unwrap(), "sum");
        h.push(LinConstraint::eq(vec![r(2), r(2)], r(2)).unwrap(), "sum2");
        h.push(LinConstraint::ge(vec![r(1), r(0)], r(0)).unwrap(), "x");
        h.push(LinConstraint::ge(vec![r(0), r(1)], r(0)).unwrap(), "y");
        h.push(LinConstraint::ge(vec![r(0), r(1)], r(0)).unwrap(), "y2");
        let res = lp_solve(&[r(2), r(1)], &h, Sense::Max).unwrap();
        assert_eq!(res, LpResult::Optimal { value: r(2), point: vec![r(1), r(0)] });
    }

    #[test]
    fn rational_vertex() {
        // max x + y s.t. 3x + y <= 2, x + 3y <= 2
        let mut h = HRep::new(2);
        h.push(LinConstraint::le(vec![r(3), r(1)], r(2)).unwrap(), "a");
        h.push(LinConstraint::le(vec![r(1), r(3)], r(2)).unwrap(), "b");
        let res = lp_solve(&[r(1), r(1)], &h, Sense::Max).unwrap();
        let half = Rational::frac(1, 2);
        assert_eq!(res, LpResult::Optimal { value: r(1), point: vec![half.clone(), half] });
    }
}
