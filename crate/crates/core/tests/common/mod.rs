use std::collections::BTreeSet;

use dcopula::exact::{RatMatrix, Rational};
use dcopula::polytope::{ConstraintKind, HRep};

/// Vertices by brute force: every choice of `n - rank(E)` inequalities made
/// tight, solved by row reduction, kept if unique and feasible.
pub fn brute_force_vertices(h: &HRep) -> BTreeSet<Vec<Rational>> {
    let n = h.dim();
    let eqs: Vec<usize> = (0..h.len()).filter(|&k| h.constraints()[k].kind == ConstraintKind::Eq).collect();
    let ineqs: Vec<usize> = (0..h.len()).filter(|&k| h.constraints()[k].kind != ConstraintKind::Eq).collect();
    let row = |k: usize| {
        let c = &h.constraints()[k];
        let mut r = c.coeffs.clone();
        r.push(c.rhs.clone());
        r
    };
    let eq_rank = if eqs.is_empty() { 0 } else { RatMatrix::from_rows(eqs.iter().map(|&k| row(k)[..n].to_vec()).collect()).unwrap().rank() };
    let need = n - eq_rank;
    let mut out = BTreeSet::new();
    let mut pick: Vec<usize> = (0..need).collect();
    loop {
        let rows: Vec<Vec<Rational>> = eqs.iter().chain(pick.iter().map(|&i| &ineqs[i])).map(|&k| row(k)).collect();
        let (r, pivots) = RatMatrix::from_rows(rows).unwrap().rref();
        if pivots.len() == n && pivots.iter().enumerate().all(|(a, &b)| a == b) {
            let x: Vec<Rational> = (0..n).map(|i| r.row(i)[n].clone()).collect();
            if h.constraints().iter().all(|c| c.is_satisfied(&x)) {
                out.insert(x);
            }
        }
        // next combination
        let mut i = need;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < ineqs.len() - need + i {
                pick[i] += 1;
                for j in i + 1..need {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}
