//! Checkerboard extension of grid points and verification of its shape.

use dcopula::copula_ops::{checkerboard_eval, is_ultramodular, verify_extension_quasi, verify_extension_ultramodular, ExtensionQuery};
use dcopula::exact::Rational;
use dcopula::families::{build_udc, Form, Space};
use dcopula::polytope::enumerate_vertices;
use dcopula::transforms::GridMatrix;

fn main() {
    let w = GridMatrix::w(3, 4);
    for (u, v) in [(1, 2), (2, 3), (5, 6)] {
        let q = ExtensionQuery::new(Rational::frac(u, 7), Rational::frac(v, 7)).unwrap();
        println!("W~({}, {}) = {}", q.u, q.v, checkerboard_eval(&w, &q));
    }
    let h = build_udc(3, 4, Space::Grid, Form::Minimal).unwrap();
    let vs = enumerate_vertices(&h).unwrap();
    let ok = vs.vertices().iter().all(|x| {
        let g = GridMatrix::from_point(3, 4, x).unwrap();
        is_ultramodular(&g).ok && verify_extension_ultramodular(&g, 3).unwrap() && verify_extension_quasi(&g, 3).unwrap()
    });
    println!("all {} vertices extend to ultramodular copulas: {ok}", vs.len());
}
