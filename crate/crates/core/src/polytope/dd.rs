//! Double description method for pointed cones `{x : A x >= 0}`.
//!
//! Rays are kept as primitive integer vectors. The arithmetic runs on `i64`
//! with 128-bit intermediates and restarts on `BigInt` if anything overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{RatMatrix, Rational};

/// Order in which the constraint rows are inserted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InsertionOrder {
    /// Sorted by constraint label.
    #[default]
    Lexicographic,
    /// Row order of the input system.
    AsGiven,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DdOptions {
    pub order: InsertionOrder,
}

struct Overflow;

trait Scalar: Clone + std::fmt::Debug {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn dot(row: &[Self], ray: &[Self]) -> Result<Self, Overflow>;
    fn sign(&self) -> i8;
    /// Primitive part of `ap * rn - an * rp`.
    fn combine(ap: &Self, rn: &[Self], an: &Self, rp: &[Self], out: &mut Vec<Self>) -> Result<(), Overflow>;
}

impl Scalar for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn dot(row: &[i64], ray: &[i64]) -> Result<i64, Overflow> {
        let mut acc: i128 = 0;
        for (a, b) in row.iter().zip(ray) {
            if *a != 0 && *b != 0 {
                acc = acc.checked_add(*a as i128 * *b as i128).ok_or(Overflow)?;
            }
        }
        i64::try_from(acc).map_err(|_| Overflow)
    }

    fn sign(&self) -> i8 {
        self.signum() as i8
    }

    fn combine(ap: &i64, rn: &[i64], an: &i64, rp: &[i64], out: &mut Vec<i64>) -> Result<(), Overflow> {
        let (ap, an) = (*ap as i128, *an as i128);
        let mut wide = [0i128; 128];
        let wide: &mut [i128] = if rn.len() <= 128 { &mut wide[..rn.len()] } else { return Err(Overflow) };
        let mut g: i128 = 0;
        for (w, (a, b)) in wide.iter_mut().zip(rn.iter().zip(rp)) {
            let v = (ap * *a as i128).checked_sub(an * *b as i128).ok_or(Overflow)?;
            *w = v;
            if v != 0 {
                g = if g == 0 { v.abs() } else { g.gcd(&v) };
            }
        }
        out.clear();
        for w in wide.iter() {
            let v = if g > 1 { *w / g } else { *w };
            out.push(i64::try_from(v).map_err(|_| Overflow)?);
        }
        Ok(())
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn dot(row: &[BigInt], ray: &[BigInt]) -> Result<BigInt, Overflow> {
        let mut acc = BigInt::zero();
        for (a, b) in row.iter().zip(ray) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        Ok(acc)
    }

    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn combine(ap: &BigInt, rn: &[BigInt], an: &BigInt, rp: &[BigInt], out: &mut Vec<BigInt>) -> Result<(), Overflow> {
        out.clear();
        let mut g = BigInt::zero();
        for (a, b) in rn.iter().zip(rp) {
            let v = ap * a - an * b;
            if !v.is_zero() {
                g = g.gcd(&v);
            }
            out.push(v);
        }
        if g > BigInt::from(1) {
            for v in out.iter_mut() {
                *v = &*v / &g;
            }
        }
        Ok(())
    }
}

/// Extreme rays of the pointed cone `{x : rows[i] . x >= 0 for all i}`, inserting
/// rows in the sequence `order` (a permutation of the row indices).
///
/// Panics if the rows do not have full column rank.
pub fn double_description(rows: &[Vec<BigInt>], order: &[usize]) -> Vec<Vec<BigInt>> {
    let d = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == d));
    assert_eq!(order.len(), rows.len());
    let (basis, init) = initial_basis(rows, order, d);
    let small: Option<Vec<Vec<i64>>> = rows.iter().map(|r| r.iter().map(i64::from_big).collect()).collect();
    if let Some(small) = small {
        if let Ok(rays) = run::<i64>(&small, order, &basis, &init) {
            return rays;
        }
    }
    run::<BigInt>(rows, order, &basis, &init).unwrap_or_else(|_| unreachable!("bigint arithmetic cannot overflow"))
}

/// Picks `d` independent rows (first in insertion order) and the rays of the
/// simplicial cone they define.
fn initial_basis(rows: &[Vec<BigInt>], order: &[usize], d: usize) -> (Vec<usize>, Vec<Vec<BigInt>>) {
    let mut chosen = Vec::new();
    let mut echelon: Vec<(Vec<Rational>, usize)> = Vec::new();
    for &i in order {
        if chosen.len() == d {
            break;
        }
        let mut v: Vec<Rational> = rows[i].iter().cloned().map(Rational::from).collect();
        for (e, pc) in &echelon {
            if v[*pc].is_zero() {
                continue;
            }
            let f = &v[*pc] / &e[*pc];
            for (x, y) in v.iter_mut().zip(e) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((v, pc));
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), d, "constraint matrix must have full column rank");
    let a = RatMatrix::from_rows(chosen.iter().map(|&i| rows[i].iter().cloned().map(Rational::from).collect()).collect())
        .expect("rectangular");
    let inv = a.inverse().expect("independent rows");
    let rays = (0..d)
        .map(|j| {
            let col: Vec<Rational> = (0..d).map(|i| inv[(i, j)].clone()).collect();
            crate::exact::to_primitive_integers(&col)
        })
        .collect();
    (chosen, rays)
}

struct RaySet<T> {
    d: usize,
    words: usize,
    coords: Vec<T>,
    zeros: Vec<u64>,
}

impl<T: Clone> RaySet<T> {
    fn len(&self) -> usize {
        self.coords.len() / self.d.max(1)
    }

    fn ray(&self, k: usize) -> &[T] {
        &self.coords[k * self.d..(k + 1) * self.d]
    }

    fn zero_set(&self, k: usize) -> &[u64] {
        &self.zeros[k * self.words..(k + 1) * self.words]
    }
}

fn run<T: Scalar>(
    rows: &[Vec<T>],
    order: &[usize],
    basis: &[usize],
    init: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, Overflow> {
    let d = basis.len();
    let m = rows.len();
    let words = m.div_ceil(64).max(1);
    let mut set = RaySet::<T> { d, words, coords: Vec::new(), zeros: Vec::new() };
    for (j, ray) in init.iter().enumerate() {
        for x in ray {
            set.coords.push(T::from_big(x).ok_or(Overflow)?);
        }
        let mut z = vec![0u64; words];
        for (k, &b) in basis.iter().enumerate() {
            if k != j {
                z[b / 64] |= 1 << (b % 64);
            }
        }
        set.zeros.extend(z);
    }

    let mut in_basis = vec![false; m];
    for &b in basis {
        in_basis[b] = true;
    }

    let mut vals: Vec<T> = Vec::new();
    let mut signs: Vec<i8> = Vec::new();
    let mut scratch: Vec<T> = Vec::with_capacity(d);
    let mut z = vec![0u64; words];
    for &row_idx in order {
        if in_basis[row_idx] {
            continue;
        }
        let row = &rows[row_idx];
        let n = set.len();
        vals.clear();
        signs.clear();
        for k in 0..n {
            let v = T::dot(row, set.ray(k))?;
            signs.push(v.sign());
            vals.push(v);
        }
        let pos: Vec<usize> = (0..n).filter(|&k| signs[k] > 0).collect();
        let neg: Vec<usize> = (0..n).filter(|&k| signs[k] < 0).collect();
        let (wi, bit) = (row_idx / 64, 1u64 << (row_idx % 64));
        if neg.is_empty() {
            for k in 0..n {
                if signs[k] == 0 {
                    set.zeros[k * words + wi] |= bit;
                }
            }
            continue;
        }

        let mut next = RaySet::<T> { d, words, coords: Vec::new(), zeros: Vec::new() };
        for k in 0..n {
            if signs[k] >= 0 {
                next.coords.extend_from_slice(set.ray(k));
                let start = next.zeros.len();
                next.zeros.extend_from_slice(set.zero_set(k));
                if signs[k] == 0 {
                    next.zeros[start + wi] |= bit;
                }
            }
        }
        let need = d.saturating_sub(2) as u32;
        for &p in &pos {
            let zp = set.zero_set(p);
            for &q in &neg {
                let zq = set.zero_set(q);
                let mut count = 0u32;
                for w in 0..words {
                    z[w] = zp[w] & zq[w];
                    count += z[w].count_ones();
                }
                if count < need {
                    continue;
                }
                if !adjacent(&set, &z, p, q) {
                    continue;
                }
                T::combine(&vals[p], set.ray(q), &vals[q], set.ray(p), &mut scratch)?;
                next.coords.extend_from_slice(&scratch);
                let start = next.zeros.len();
                next.zeros.extend_from_slice(&z);
                next.zeros[start + wi] |= bit;
            }
        }
        set = next;
    }
    Ok((0..set.len()).map(|k| set.ray(k).iter().map(T::to_big).collect()).collect())
}

/// Combinatorial adjacency: no third ray is tight on every row of `z`.
fn adjacent<T: Clone>(set: &RaySet<T>, z: &[u64], p: usize, q: usize) -> bool {
    let words = set.words;
    'rays: for (k, zk) in set.zeros.chunks_exact(words).enumerate() {
        for w in 0..words {
            if z[w] & !zk[w] != 0 {
                continue 'rays;
            }
        }
        if k != p && k != q {
            return false;
        }
    }
    true
}
