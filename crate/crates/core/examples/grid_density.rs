//! The grid/density correspondence and the determinants of `T` and `tau`.

use dcopula::transforms::{apply_t, apply_t_inv, t_matrix, tau_det, GridMatrix};

fn main() {
    let w = GridMatrix::w(4, 4);
    let d = apply_t(&w).unwrap();
    println!("density of W: {:?}", d.to_point().iter().map(ToString::to_string).collect::<Vec<_>>());
    assert_eq!(apply_t_inv(&d), w);

    for (p, q) in [(2, 3), (3, 4), (5, 5)] {
        println!("det T({p},{q}) = {}, det tau = {}", t_matrix(p, q).det().unwrap(), tau_det(p, q));
    }
}
