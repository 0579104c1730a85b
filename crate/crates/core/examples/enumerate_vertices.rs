//! Vertex enumeration by double description.

use dcopula::families::{build_udc, Form, Space};
use dcopula::polytope::enumerate_vertices;
use dcopula::transforms::DensityMatrix;

fn main() {
    let h = build_udc(3, 3, Space::Density, Form::Minimal).unwrap();
    let v = enumerate_vertices(&h).unwrap();
    println!("UDC 3x3 has {} vertices", v.len());
    for x in v.vertices() {
        let d = DensityMatrix::from_point(3, 3, x).unwrap();
        for i in 1..=3 {
            let row: Vec<String> = (1..=3).map(|j| format!("{:>4}", d.x(i, j).to_string())).collect();
            println!("{}", row.join(""));
        }
        println!();
    }
}
