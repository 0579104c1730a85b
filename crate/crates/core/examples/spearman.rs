//! Spearman's rho of discrete copulas, exactly.

use dcopula::copula_ops::spearman_rho;
use dcopula::transforms::GridMatrix;

fn main() {
    for p in 2..=6 {
        let w = spearman_rho(&GridMatrix::w(p, p)).unwrap();
        let m = spearman_rho(&GridMatrix::m(p, p)).unwrap();
        println!("p = {p}: rho(W) = {w}, rho(M) = {m}");
    }
}
