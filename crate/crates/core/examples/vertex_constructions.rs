//! Transpose, flip, direct sums and decomposition of vertices.

use dcopula::census::square_vertices;
use dcopula::families::{build_udc, Family, Form, Space};
use dcopula::polytope::is_vertex;
use dcopula::transforms::{decompose, flip, square_direct_sum, Decomposition};

fn main() {
    let v2 = square_vertices(Family::Udc, 2).unwrap();
    let v3 = square_vertices(Family::Udc, 3).unwrap();
    let h5 = build_udc(5, 5, Space::Density, Form::Minimal).unwrap();
    let mut vertices = 0;
    for b in &v2 {
        for d in &v3 {
            let s = square_direct_sum(b, d).unwrap();
            vertices += usize::from(is_vertex(&h5, &s.to_point()).unwrap());
        }
    }
    println!("{vertices} of {} square direct sums are vertices of UDC 5", v2.len() * v3.len());

    for d in &v3 {
        match decompose(d).unwrap() {
            Decomposition::Indecomposable => println!("indecomposable {:?}", d.to_point().iter().map(ToString::to_string).collect::<Vec<_>>()),
            Decomposition::Blocks(b) => println!("{} blocks, flipped: {:?}", b.len(), flip(d).to_point().iter().map(ToString::to_string).collect::<Vec<_>>()),
        }
    }
}
