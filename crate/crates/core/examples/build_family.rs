//! Builds a family system and prints it in cdd format.
//!
//! Usage: `cargo run --example build_family -- udc:3x3:density:minimal`

use dcopula::families::FamilySpec;
use dcopula::polytope::io::write_hrep_cdd;

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "udc:3x3:density:minimal".to_string());
    let spec: FamilySpec = arg.parse().expect("family spec such as cdq:3x4:grid");
    let h = spec.build().expect("supported family");
    println!("* {spec}: {} inequalities, {} equalities", h.inequality_count(), h.equality_count());
    print!("{}", write_hrep_cdd(&h));
}
