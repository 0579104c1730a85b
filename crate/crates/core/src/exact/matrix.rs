use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{common_denominator, Rational};
use super::ExactError;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(ExactError::DimensionMismatch { expected: c, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { rows: r, cols: c, entries })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
            .collect();
        Self::from_rows(data).expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Integer rows obtained by clearing each row's denominators, plus the
    /// product of the multipliers used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = common_denominator(row);
                let ints = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
                scale *= &l;
                ints
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let (rows, scale) = self.integer_rows();
        let d = bareiss_det(rows);
        Ok(Rational::new(d, scale).expect("row scales are positive"))
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let (rows, _) = self.integer_rows();
        integer_rank(rows, self.cols)
    }

    /// Reduced row echelon form over the rationals. Returns the reduced matrix
    /// and the pivot column of each nonzero row.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_column_order(&order)
    }

    /// Gauss-Jordan elimination visiting candidate pivot columns in `order`.
    pub fn rref_with_column_order(&self, order: &[usize]) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].recip().expect("nonzero pivot");
            for j in 0..m.cols {
                if !m[(r, j)].is_zero() {
                    let v = &m[(r, j)] * &inv;
                    m[(r, j)] = v;
                }
            }
            let pivot_row: Vec<Rational> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for (j, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let v = &m[(i, j)] - &(&f * pv);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if b.len() != self.rows {
            return Err(ExactError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let n = self.rows;
        let aug = RatMatrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let order: Vec<usize> = (0..n).collect();
        let (red, pivots) = aug.rref_with_column_order(&order);
        if pivots.len() < n {
            return Err(ExactError::Singular);
        }
        Ok((0..n).map(|i| red[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Result<RatMatrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let aug = RatMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let order: Vec<usize> = (0..n).collect();
        let (red, pivots) = aug.rref_with_column_order(&order);
        if pivots.len() < n {
            return Err(ExactError::Singular);
        }
        Ok(RatMatrix::from_fn(n, n, |i, j| red[(i, n + j)].clone()))
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|i| super::rational::dot(self.row(i), x)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Bareiss determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over the rationals of an integer matrix, by fraction-free elimination.
pub fn integer_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn det_examples() {
        assert_eq!(RatMatrix::identity(3).det().unwrap(), Rational::one());
        let swap = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det().unwrap(), Rational::from(-1i64));
        let rect = RatMatrix::zeros(2, 3);
        assert!(matches!(rect.det(), Err(ExactError::NotSquare { .. })));
        let frac = RatMatrix::from_rows(vec![
            vec![Rational::frac(1, 2), Rational::frac(1, 3)],
            vec![Rational::frac(1, 4), Rational::frac(1, 5)],
        ])
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(frac.det().unwrap(), Rational::frac(1, 60));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::zeros(2, 3).rank(), 0);
        assert_eq!(RatMatrix::identity(4).rank(), 4);
        let m = RatMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let skip = RatMatrix::from_i64_rows(&[&[0, 2, 1], &[0, 4, 3], &[0, 6, 4]]);
        assert_eq!(skip.rank(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[1, 3]]);
        let x = m.solve(&[Rational::from(3i64), Rational::from(5i64)]).unwrap();
        assert_eq!(x, vec![Rational::frac(4, 5), Rational::frac(7, 5)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        let sing = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(ExactError::Singular));
    }

    fn gauss_rank(m: &RatMatrix) -> usize {
        m.rref().1.len()
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec((-4i64..5, 1i64..4), rows * cols).prop_map(move |v| {
            let e = v.into_iter().map(|(n, d)| Rational::frac(n, d)).collect();
            RatMatrix::from_vec(rows, cols, e).unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in arb_matrix(4, 4), b in arb_matrix(4, 4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn bareiss_rank_matches_gauss_jordan(a in arb_matrix(5, 4)) {
            prop_assert_eq!(a.rank(), gauss_rank(&a));
        }

        #[test]
        fn low_rank_products(a in arb_matrix(5, 2), b in arb_matrix(2, 4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= 2);
            prop_assert_eq!(ab.rank(), gauss_rank(&ab));
        }
    }
}
