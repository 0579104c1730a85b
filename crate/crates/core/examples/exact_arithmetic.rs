//! Rationals, exact determinants and a small linear program.

use dcopula::exact::{lp_solve, RatMatrix, Rational, Sense};
use dcopula::polytope::{HRep, LinConstraint};

fn main() {
    let a = RatMatrix::from_i64_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
    println!("det = {}", a.det().unwrap());
    let inv = a.inverse().unwrap();
    println!("inverse row 0 = {:?}", inv.row(0).iter().map(ToString::to_string).collect::<Vec<_>>());

    let x: Rational = "7/12".parse().unwrap();
    println!("7/12 + 5/12 = {}", &x + Rational::frac(5, 12));

    // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0
    let r = |v: i64| Rational::from(v);
    let mut h = HRep::new(2);
    h.push(LinConstraint::le(vec![r(1), r(2)], r(4)).unwrap(), "a");
    h.push(LinConstraint::le(vec![r(3), r(1)], r(6)).unwrap(), "b");
    h.push(LinConstraint::ge(vec![r(1), r(0)], r(0)).unwrap(), "x");
    h.push(LinConstraint::ge(vec![r(0), r(1)], r(0)).unwrap(), "y");
    let sol = lp_solve(&[r(1), r(1)], &h, Sense::Max).unwrap();
    println!("{sol:?}");
}
