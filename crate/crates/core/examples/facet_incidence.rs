//! Facet/vertex incidences of the smallest ultramodular polytope.

use dcopula::families::{build_udc, Form, Space};
use dcopula::polytope::{certify_minimal, dimension, enumerate_vertices, facet_vertex_incidence};

fn main() {
    let h = certify_minimal(&build_udc(3, 3, Space::Density, Form::Defining).unwrap()).unwrap().minimal;
    let v = enumerate_vertices(&h).unwrap();
    println!("dimension {}, {} vertices, {} facets", dimension(&h).unwrap(), v.len(), h.inequality_count());
    for (label, verts) in facet_vertex_incidence(&h, &v) {
        println!("{label:>10}: {} vertices {:?}", verts.len(), verts);
    }
}
