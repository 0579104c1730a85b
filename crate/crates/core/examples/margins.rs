//! Transportation polytopes with margins and their cumulative counterparts.

use dcopula::exact::Rational;
use dcopula::families::{build_asa, build_saf, build_transport, build_udc_margins};
use dcopula::polytope::{contains, enumerate_vertices};
use dcopula::transforms::{apply_t_inv, second_difference, DensityMatrix};

fn main() {
    let r = |v: i64| Rational::from(v);
    let (u, v) = (vec![r(2), r(1), r(3)], vec![r(4), r(2)]);
    let t = build_transport(&u, &v, false).unwrap();
    let a = build_transport(&u, &v, true).unwrap();
    let udc = build_udc_margins(&u, &v).unwrap();
    println!(
        "T(u,v): {} vertices, A(u,v): {} vertices, UDC(u,v): {} vertices",
        enumerate_vertices(&t).unwrap().len(),
        enumerate_vertices(&a).unwrap().len(),
        enumerate_vertices(&udc).unwrap().len()
    );

    // Margins sum to pq = 6, so the cumulative sums scaled by 1/pq give the grid boundary.
    let cum = |m: &[Rational]| m.iter().scan(Rational::zero(), |s, x| { *s += x; Some(s.clone()) }).collect::<Vec<_>>();
    let (cu, cv) = (cum(&u), cum(&v));
    let saf = build_saf(&cu, &cv).unwrap();
    let asa = build_asa(&cu, &cv).unwrap();
    let x = DensityMatrix::from_i64_rows(&[&[2, 0], &[1, 0], &[1, 2]]);
    let g = apply_t_inv(&x);
    let c = g.to_point();
    println!("cumulative point in SAF: {}, in ASA: {}", contains(&saf, &c).unwrap().inside, contains(&asa, &c).unwrap().inside);
    assert_eq!(second_difference(&g), x);
}
