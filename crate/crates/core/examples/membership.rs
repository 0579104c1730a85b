//! Exact membership and vertex tests.

use dcopula::exact::Rational;
use dcopula::families::{build_dc, Form, Space};
use dcopula::polytope::{contains, is_vertex};
use dcopula::transforms::GridMatrix;

fn main() {
    let h = build_dc(3, 3, Space::Grid, Form::Defining).unwrap();
    for (name, g) in [("pi", GridMatrix::pi(3, 3)), ("w", GridMatrix::w(3, 3)), ("m", GridMatrix::m(3, 3))] {
        let x = g.to_point();
        println!("{name}: member {}, vertex {}", contains(&h, &x).unwrap().inside, is_vertex(&h, &x).unwrap());
    }
    let mut bad = GridMatrix::pi(3, 3).to_point();
    bad[5] = Rational::frac(1, 2);
    println!("perturbed: {:?}", contains(&h, &bad).unwrap().violated);
}
