//! Decomposable and indecomposable vertices of the square families.
//!
//! Usage: `cargo run --release --example census -- 4`

use dcopula::census::{composition_check, gf_check, run_census, write_csv};
use dcopula::families::Family;

fn main() {
    let p_max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    for family in [Family::Udc, Family::Cdq] {
        let c = run_census(family, p_max).unwrap();
        write_csv(&c, std::io::stdout()).unwrap();
        println!(
            "V = 1/(1 - ID): {}, V D = D^2 + D - 1: {}",
            composition_check(&c, p_max).unwrap(),
            gf_check(&c, p_max).unwrap()
        );
    }
}
