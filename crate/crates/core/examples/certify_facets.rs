//! Removes redundant rows by LP and compares facet counts with closed forms.

use dcopula::families::{build_cdq, build_udc, Family, FamilySpec, Form, Space};
use dcopula::polytope::certify_minimal;

fn main() {
    for (p, q) in [(3, 4), (4, 4), (4, 5)] {
        let udc = certify_minimal(&build_udc(p, q, Space::Grid, Form::Defining).unwrap()).unwrap();
        let cdq = certify_minimal(&build_cdq(p, q, Space::Grid, Form::Defining).unwrap()).unwrap();
        println!(
            "{p}x{q}: udc {} (formula {}), cdq {} (formula {})",
            udc.facet_count(),
            (p - 2) * (q - 2) + 2 * (p - 1) * (q - 1),
            cdq.facet_count(),
            2 * ((p - 1) * (q - 1) + 1)
        );
    }
    let asm = certify_minimal(&FamilySpec::new(Family::Asm, 4, 4, Space::Density, Form::Defining).build().unwrap()).unwrap();
    println!("asm 4x4: {} facets, {} rows dropped", asm.facet_count(), asm.removed.len());
}
