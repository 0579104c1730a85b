//! Grid/density matrices, the unimodular map `T`, the map `tau`, and the
//! vertex constructions (transpose, flip, direct sum, decomposition).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("grid boundary is not the uniform copula boundary at ({0},{1})")]
    BadBoundary(usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Cumulative matrix `c_ij = C(i/p, j/q)`, shape `(p+1) x (q+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridMatrix {
    p: usize,
    q: usize,
    c: RatMatrix,
}

impl GridMatrix {
    pub fn new(c: RatMatrix) -> Result<Self, TransformError> {
        if c.rows() < 2 || c.cols() < 2 {
            return Err(TransformError::Shape(format!("grid must be at least 2x2, got {}x{}", c.rows(), c.cols())));
        }
        Ok(GridMatrix { p: c.rows() - 1, q: c.cols() - 1, c })
    }

    pub fn from_fn(p: usize, q: usize, f: impl FnMut(usize, usize) -> Rational) -> Self {
        GridMatrix { p, q, c: RatMatrix::from_fn(p + 1, q + 1, f) }
    }

    /// Reads a point in grid coordinates (row-major, length `(p+1)(q+1)`).
    pub fn from_point(p: usize, q: usize, x: &[Rational]) -> Result<Self, TransformError> {
        let c = RatMatrix::from_vec(p + 1, q + 1, x.to_vec()).map_err(|e| TransformError::Shape(e.to_string()))?;
        Ok(GridMatrix { p, q, c })
    }

    pub fn to_point(&self) -> Vec<Rational> {
        self.c.entries().to_vec()
    }

    /// Independence copula `ij/(pq)`.
    pub fn pi(p: usize, q: usize) -> Self {
        Self::from_fn(p, q, |i, j| Rational::frac((i * j) as i64, (p * q) as i64))
    }

    /// Lower Frechet bound `max(0, i/p + j/q - 1)`.
    pub fn w(p: usize, q: usize) -> Self {
        Self::from_fn(p, q, |i, j| {
            Rational::frac(i as i64, p as i64) + Rational::frac(j as i64, q as i64) - Rational::one()
        })
        .map(|x| x.max(Rational::zero()))
    }

    /// Upper Frechet bound `min(i/p, j/q)`.
    pub fn m(p: usize, q: usize) -> Self {
        Self::from_fn(p, q, |i, j| Rational::frac(i as i64, p as i64).min(Rational::frac(j as i64, q as i64)))
    }

    fn map(self, mut f: impl FnMut(Rational) -> Rational) -> Self {
        let (p, q) = (self.p, self.q);
        let entries = self.c.entries().iter().cloned().map(&mut f).collect();
        GridMatrix { p, q, c: RatMatrix::from_vec(p + 1, q + 1, entries).expect("same shape") }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn c(&self, i: usize, j: usize) -> &Rational {
        &self.c[(i, j)]
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.c
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &GridMatrix, alpha: &Rational) -> Result<GridMatrix, TransformError> {
        if (self.p, self.q) != (other.p, other.q) {
            return Err(TransformError::Shape("grids differ in size".into()));
        }
        let beta = Rational::one() - alpha;
        Ok(GridMatrix::from_fn(self.p, self.q, |i, j| alpha * self.c(i, j) + &beta * other.c(i, j)))
    }

    /// First boundary node violating the uniform boundary, if any.
    pub fn boundary_violation(&self) -> Option<(usize, usize)> {
        let (p, q) = (self.p, self.q);
        for i in 0..=p {
            for j in 0..=q {
                let expected = if i == 0 || j == 0 {
                    Rational::zero()
                } else if i == p {
                    Rational::frac(j as i64, q as i64)
                } else if j == q {
                    Rational::frac(i as i64, p as i64)
                } else {
                    continue;
                };
                if self.c[(i, j)] != expected {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Density matrix `x`, shape `p x q`; for the copula families row sums are `q`
/// and column sums `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DensityMatrix {
    p: usize,
    q: usize,
    x: Vec<Rational>,
}

impl DensityMatrix {
    pub fn new(x: RatMatrix) -> Self {
        DensityMatrix { p: x.rows(), q: x.cols(), x: x.entries().to_vec() }
    }

    pub fn from_fn(p: usize, q: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut x = Vec::with_capacity(p * q);
        for i in 1..=p {
            for j in 1..=q {
                x.push(f(i, j));
            }
        }
        DensityMatrix { p, q, x }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::new(RatMatrix::from_i64_rows(rows))
    }

    /// Reads a point in density coordinates (row-major, length `pq`).
    pub fn from_point(p: usize, q: usize, x: &[Rational]) -> Result<Self, TransformError> {
        if x.len() != p * q {
            return Err(TransformError::Shape(format!("expected {} entries, got {}", p * q, x.len())));
        }
        Ok(DensityMatrix { p, q, x: x.to_vec() })
    }

    pub fn to_point(&self) -> Vec<Rational> {
        self.x.clone()
    }

    pub fn zeros(p: usize, q: usize) -> Self {
        DensityMatrix { p, q, x: vec![Rational::zero(); p * q] }
    }

    /// Permutation matrix with ones at `(i, perm[i])` (0-based).
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        Self::from_fn(n, n, |i, j| if perm[i - 1] == j - 1 { Rational::one() } else { Rational::zero() })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Entry `x_ij`, 1-based.
    pub fn x(&self, i: usize, j: usize) -> &Rational {
        &self.x[(i - 1) * self.q + (j - 1)]
    }

    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_vec(self.p, self.q, self.x.clone()).expect("consistent shape")
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (1..=self.p).map(|i| (1..=self.q).map(|j| self.x(i, j).clone()).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        (1..=self.q).map(|j| (1..=self.p).map(|i| self.x(i, j).clone()).sum()).collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        DensityMatrix { p: self.p, q: self.q, x: self.x.iter().map(|v| v * s).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.q, self.p, |i, j| self.x(j, i).clone())
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self.x(r0 + i - 1, c0 + j - 1).clone())
    }

    fn block_is_zero(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> bool {
        rows.into_iter().all(|i| cols.clone().all(|j| self.x(i, j).is_zero()))
    }
}

/// `x_ij = pq (c_ij + c_{i-1,j-1} - c_{i,j-1} - c_{i-1,j})` without boundary checks.
pub fn second_difference(g: &GridMatrix) -> DensityMatrix {
    let pq = Rational::from((g.p * g.q) as i64);
    DensityMatrix::from_fn(g.p, g.q, |i, j| {
        (g.c(i, j) + g.c(i - 1, j - 1) - g.c(i, j - 1) - g.c(i - 1, j)) * &pq
    })
}

/// The map `T` scaled by `pq`; requires the uniform boundary.
pub fn apply_t(g: &GridMatrix) -> Result<DensityMatrix, TransformError> {
    if let Some((i, j)) = g.boundary_violation() {
        return Err(TransformError::BadBoundary(i, j));
    }
    Ok(second_difference(g))
}

/// Cumulative double sums scaled by `1/pq`.
pub fn apply_t_inv(d: &DensityMatrix) -> GridMatrix {
    let (p, q) = (d.p, d.q);
    let pq = Rational::from((p * q) as i64);
    let mut c = RatMatrix::zeros(p + 1, q + 1);
    for i in 1..=p {
        for j in 1..=q {
            let v = d.x(i, j) / &pq + &c[(i - 1, j)] + &c[(i, j - 1)] - &c[(i - 1, j - 1)];
            c[(i, j)] = v;
        }
    }
    GridMatrix { p, q, c }
}

/// Matrix of `T` on the `pq` coordinates `c_ij` (`i in [p], j in [q]`, row-major,
/// with `c_0* = c_*0 = 0`), unscaled.
pub fn t_matrix(p: usize, q: usize) -> RatMatrix {
    let idx = |i: usize, j: usize| (i - 1) * q + (j - 1);
    let mut m = RatMatrix::zeros(p * q, p * q);
    for i in 1..=p {
        for j in 1..=q {
            let r = idx(i, j);
            m[(r, idx(i, j))] += Rational::one();
            if i > 1 && j > 1 {
                m[(r, idx(i - 1, j - 1))] += Rational::one();
            }
            if j > 1 {
                m[(r, idx(i, j - 1))] -= Rational::one();
            }
            if i > 1 {
                m[(r, idx(i - 1, j))] -= Rational::one();
            }
        }
    }
    m
}

/// Matrix of the linear map `tau` on `R^{p x q}` (columns are images of `e_ij`).
pub fn tau_matrix(p: usize, q: usize) -> RatMatrix {
    let idx = |i: usize, j: usize| (i - 1) * q + (j - 1);
    let mut m = RatMatrix::zeros(p * q, p * q);
    for i in 1..=p {
        for j in 1..=q {
            let col = idx(i, j);
            let mut add = |r: usize, v: i64| m[(r, col)] += Rational::from(v);
            match (i < p, j < q) {
                (true, true) => {
                    for k in 1..=i {
                        add(idx(k, j), 1);
                        add(idx(k, j + 1), -1);
                    }
                }
                (true, false) => {
                    for k in 1..=q {
                        add(idx(i, k), 1);
                        add(idx(i + 1, k), -1);
                    }
                }
                (false, true) => {
                    for k in 1..=j {
                        add(idx(p - 1, k), 1);
                        add(idx(p, k), -1);
                    }
                }
                (false, false) => add(idx(p, q), 1),
            }
        }
    }
    m
}

pub fn tau_det(p: usize, q: usize) -> Rational {
    assert!(p >= 2 && q >= 2, "tau is defined for p, q >= 2");
    tau_matrix(p, q).det().expect("square")
}

pub fn transpose_point(g: &GridMatrix) -> GridMatrix {
    GridMatrix { p: g.q, q: g.p, c: g.c.transpose() }
}

/// `[[0, B], [D, 0]]` with `B` top-right and `D` bottom-left.
pub fn direct_sum(b: &DensityMatrix, d: &DensityMatrix) -> DensityMatrix {
    let (p, q, s, t) = (b.p, b.q, d.p, d.q);
    DensityMatrix::from_fn(p + s, q + t, |i, j| {
        if i <= p && j > t {
            b.x(i, j - t).clone()
        } else if i > p && j <= t {
            d.x(i - p, j).clone()
        } else {
            Rational::zero()
        }
    })
}

/// Direct sum of square blocks rescaled to the margins of the larger square:
/// `(p+s) (B/p (+) D/s)`.
pub fn square_direct_sum(b: &DensityMatrix, d: &DensityMatrix) -> Result<DensityMatrix, TransformError> {
    if b.p != b.q {
        return Err(TransformError::NotSquare(b.p, b.q));
    }
    if d.p != d.q {
        return Err(TransformError::NotSquare(d.p, d.q));
    }
    let n = Rational::from((b.p + d.p) as i64);
    let bs = b.scale(&(&n / Rational::from(b.p as i64)));
    let ds = d.scale(&(&n / Rational::from(d.p as i64)));
    Ok(direct_sum(&bs, &ds))
}

/// Reverses the column order.
pub fn flip(d: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_fn(d.p, d.q, |i, j| d.x(i, d.q - j + 1).clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Indecomposable,
    Blocks(Vec<DensityMatrix>),
}

impl Decomposition {
    pub fn is_decomposable(&self) -> bool {
        matches!(self, Decomposition::Blocks(_))
    }
}

/// Splits a square matrix into its anti-diagonal blocks, top block first. A
/// split at `k` needs the top-left `k x (n-k)` and bottom-right `(n-k) x k`
/// blocks to vanish; the smallest `k` is taken and the rest is split again.
pub fn decompose(d: &DensityMatrix) -> Result<Decomposition, TransformError> {
    if d.p != d.q {
        return Err(TransformError::NotSquare(d.p, d.q));
    }
    let mut blocks = Vec::new();
    let mut rest = d.clone();
    while let Some(k) = first_split(&rest) {
        let n = rest.p;
        blocks.push(rest.block(1..k + 1, n - k + 1..n + 1));
        rest = rest.block(k + 1..n + 1, 1..n - k + 1);
    }
    if blocks.is_empty() {
        return Ok(Decomposition::Indecomposable);
    }
    blocks.push(rest);
    Ok(Decomposition::Blocks(blocks))
}

fn first_split(d: &DensityMatrix) -> Option<usize> {
    let n = d.p;
    (1..n).find(|&k| d.block_is_zero(1..k + 1, 1..n - k + 1) && d.block_is_zero(k + 1..n + 1, n - k + 1..n + 1))
}

/// Folds a block list back with `direct_sum`.
pub fn recompose(blocks: &[DensityMatrix]) -> Option<DensityMatrix> {
    let (last, init) = blocks.split_last()?;
    Some(init.iter().rev().fold(last.clone(), |acc, b| direct_sum(b, &acc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_w_densities() {
        let d = apply_t(&GridMatrix::pi(3, 4)).unwrap();
        assert!(d.to_point().iter().all(|x| *x == Rational::one()));
        let w = apply_t(&GridMatrix::w(3, 3)).unwrap();
        assert_eq!(w, DensityMatrix::permutation(&[2, 1, 0]).scale(&Rational::from(3i64)));
        assert_eq!(apply_t_inv(&w), GridMatrix::w(3, 3));
    }

    #[test]
    fn bad_boundary() {
        let mut g = GridMatrix::pi(2, 2).to_point();
        g[1] = Rational::one();
        let g = GridMatrix::from_point(2, 2, &g).unwrap();
        assert_eq!(apply_t(&g), Err(TransformError::BadBoundary(0, 1)));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_det(3, 4), Rational::from(-4i64));
        assert_eq!(tau_det(4, 3), Rational::from(9i64));
        assert_eq!(tau_det(2, 2), Rational::from(-1i64));
    }

    #[test]
    fn decompositions() {
        let w = DensityMatrix::permutation(&[2, 1, 0]);
        match decompose(&w).unwrap() {
            Decomposition::Blocks(b) => {
                assert_eq!(b.len(), 3);
                assert_eq!(recompose(&b).unwrap(), w);
            }
            other => panic!("{other:?}"),
        }
        let ones = DensityMatrix::from_fn(3, 3, |_, _| Rational::one());
        assert_eq!(decompose(&ones).unwrap(), Decomposition::Indecomposable);
        assert!(decompose(&DensityMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn flip_of_sum_is_block_diagonal() {
        let a = DensityMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = DensityMatrix::from_i64_rows(&[&[5]]);
        let f = flip(&direct_sum(&a, &b));
        assert_eq!(f, DensityMatrix::from_i64_rows(&[&[2, 1, 0], &[4, 3, 0], &[0, 0, 5]]));
        assert_eq!(flip(&f), direct_sum(&a, &b));
    }
}
