//! cdd and JSON round trips.

use dcopula::families::{build_cdq, Form, Space};
use dcopula::polytope::enumerate_vertices;
use dcopula::polytope::io::{hrep_from_json, hrep_to_json, parse_hrep_cdd, parse_vrep_cdd, write_hrep_cdd, write_vrep_cdd};

fn main() {
    let h = build_cdq(3, 3, Space::Density, Form::Minimal).unwrap();
    let ine = write_hrep_cdd(&h);
    assert_eq!(parse_hrep_cdd(&ine).unwrap(), h);
    assert_eq!(hrep_from_json(&hrep_to_json(&h)).unwrap(), h);
    println!("{}", ine.lines().take(8).collect::<Vec<_>>().join("\n"));

    let v = enumerate_vertices(&h).unwrap();
    let ext = write_vrep_cdd(&v);
    assert_eq!(parse_vrep_cdd(&ext).unwrap(), v);
    print!("{ext}");
}
