//! Affine substitution of the equality rows of an H-representation.

use crate::exact::{dot, RatMatrix, Rational};

use super::{ConstraintKind, HRep, PolytopeError};

/// Parametrization `x = x0 + N y` of the affine hull cut out by the equalities.
///
/// The free coordinates `y` are a subset of the original coordinates; pivots are
/// taken from the highest-indexed columns first so that, for grid and density
/// systems, the free block is the top-left interior one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    dim: usize,
    free: Vec<usize>,
    x0: Vec<Rational>,
    basis: Vec<Vec<(usize, Rational)>>,
}

impl AffineChart {
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduced_dim(&self) -> usize {
        self.free.len()
    }

    pub fn free_coords(&self) -> &[usize] {
        &self.free
    }

    pub fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        assert_eq!(y.len(), self.free.len());
        self.x0
            .iter()
            .zip(&self.basis)
            .map(|(c, row)| {
                let mut v = c.clone();
                for (t, coef) in row {
                    v += coef * &y[*t];
                }
                v
            })
            .collect()
    }

    /// Free coordinates of `x`; meaningful for points satisfying the equalities.
    pub fn project(&self, x: &[Rational]) -> Vec<Rational> {
        self.free.iter().map(|&i| x[i].clone()).collect()
    }

    /// Pulls `a.x` back to `(a N) . y + a.x0`.
    pub fn pull_back(&self, a: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut out = vec![Rational::zero(); self.free.len()];
        for (ai, row) in a.iter().zip(&self.basis) {
            if ai.is_zero() {
                continue;
            }
            for (t, coef) in row {
                out[*t] += ai * coef;
            }
        }
        (out, dot(a, &self.x0))
    }
}

/// `coeffs . y <= rhs`, pulled back from row `source` of the original system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub source: usize,
}

#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub chart: AffineChart,
    pub rows: Vec<ReducedRow>,
    /// Inequalities that hold identically on the affine hull.
    pub tautologies: Vec<usize>,
    /// Equalities implied by earlier equalities.
    pub dependent_equalities: Vec<usize>,
}

impl ReducedSystem {
    pub fn le_rows(&self) -> Vec<crate::exact::LeRow> {
        self.rows.iter().map(|r| crate::exact::LeRow { coeffs: r.coeffs.clone(), rhs: r.rhs.clone() }).collect()
    }

    pub fn independent_equalities<'a>(&'a self, h: &'a HRep) -> impl Iterator<Item = usize> + 'a {
        h.constraints()
            .iter()
            .enumerate()
            .filter(move |(i, c)| c.kind == ConstraintKind::Eq && !self.dependent_equalities.contains(i))
            .map(|(i, _)| i)
    }
}

/// Eliminates the equalities of `h`. Fails with `EmptyPolytope` when the
/// equalities are inconsistent or an inequality becomes a false constant.
pub fn reduce(h: &HRep) -> Result<ReducedSystem, PolytopeError> {
    let n = h.dim();
    let mut echelon: Vec<(Vec<Rational>, usize)> = Vec::new();
    let mut independent = Vec::new();
    let mut dependent = Vec::new();
    for (idx, c) in h.constraints().iter().enumerate() {
        if c.kind != ConstraintKind::Eq {
            continue;
        }
        let mut row: Vec<Rational> = c.coeffs.iter().cloned().chain(std::iter::once(c.rhs.clone())).collect();
        for (e, pc) in &echelon {
            if row[*pc].is_zero() {
                continue;
            }
            let f = &row[*pc] / &e[*pc];
            for (r, ev) in row.iter_mut().zip(e) {
                if !ev.is_zero() {
                    *r -= &f * ev;
                }
            }
        }
        match (0..n).rev().find(|&j| !row[j].is_zero()) {
            Some(pc) => {
                echelon.push((row, pc));
                independent.push(idx);
            }
            None if row[n].is_zero() => dependent.push(idx),
            None => return Err(PolytopeError::EmptyPolytope),
        }
    }

    let chart = if independent.is_empty() {
        AffineChart {
            dim: n,
            free: (0..n).collect(),
            x0: vec![Rational::zero(); n],
            basis: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    } else {
        let rows: Vec<Vec<Rational>> = echelon.into_iter().map(|(r, _)| r).collect();
        let m = RatMatrix::from_rows(rows)?;
        let order: Vec<usize> = (0..n).rev().collect();
        let (r, pivots) = m.rref_with_column_order(&order);
        let mut is_pivot = vec![None; n];
        for (ri, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(ri);
        }
        let free: Vec<usize> = (0..n).filter(|&j| is_pivot[j].is_none()).collect();
        let mut x0 = vec![Rational::zero(); n];
        let mut basis = vec![Vec::new(); n];
        for (t, &j) in free.iter().enumerate() {
            basis[j].push((t, Rational::one()));
        }
        for (ri, &c) in pivots.iter().enumerate() {
            x0[c] = r[(ri, n)].clone();
            for (t, &j) in free.iter().enumerate() {
                let e = &r[(ri, j)];
                if !e.is_zero() {
                    basis[c].push((t, -e));
                }
            }
        }
        AffineChart { dim: n, free, x0, basis }
    };

    let mut rows = Vec::new();
    let mut tautologies = Vec::new();
    for (idx, c) in h.constraints().iter().enumerate() {
        if c.kind == ConstraintKind::Eq {
            continue;
        }
        let (a, b) = c.as_le();
        let (coeffs, shift) = chart.pull_back(&a);
        let rhs = b - shift;
        if coeffs.iter().all(Rational::is_zero) {
            if rhs.is_negative() {
                return Err(PolytopeError::EmptyPolytope);
            }
            tautologies.push(idx);
        } else {
            rows.push(ReducedRow { coeffs, rhs, source: idx });
        }
    }
    Ok(ReducedSystem { chart, rows, tautologies, dependent_equalities: dependent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::LinConstraint;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn simplex_in_plane() {
        // x + y + z = 1, x,y,z >= 0
        let mut h = HRep::new(3);
        h.push(LinConstraint::eq(vec![r(1), r(1), r(1)], r(1)).unwrap(), "sum");
        h.push(LinConstraint::eq(vec![r(2), r(2), r(2)], r(2)).unwrap(), "sum2");
        for i in 0..3 {
            let mut a = vec![r(0); 3];
            a[i] = r(1);
            h.push(LinConstraint::ge(a, r(0)).unwrap(), format!("nn{i}"));
        }
        let red = reduce(&h).unwrap();
        assert_eq!(red.chart.free_coords(), &[0, 1]);
        assert_eq!(red.dependent_equalities, vec![1]);
        assert_eq!(red.rows.len(), 3);
        let x = red.chart.lift(&[Rational::frac(1, 4), Rational::frac(1, 2)]);
        assert_eq!(x[2], Rational::frac(1, 4));
    }

    #[test]
    fn inconsistent_equalities() {
        let mut h = HRep::new(1);
        h.push(LinConstraint::eq(vec![r(1)], r(1)).unwrap(), "a");
        h.push(LinConstraint::eq(vec![r(1)], r(2)).unwrap(), "b");
        assert!(matches!(reduce(&h), Err(PolytopeError::EmptyPolytope)));
    }
}
