//! Maximum-entropy densities with a prescribed Spearman's rho.

use dcopula::families::{Family, FamilySpec, Form, Space};
use dcopula::maxent::{solve_maxent, MaxEntProblem};

fn main() {
    let birkhoff = FamilySpec::new(Family::Birkhoff, 4, 4, Space::Density, Form::Defining);
    for target in [0.0, 0.2, 0.4, -0.4] {
        let sol = solve_maxent(&MaxEntProblem::new(birkhoff.clone()).with_rho_target(target)).unwrap();
        println!("birkhoff 4, rho {target:+}: entropy {:.6} after {} steps", sol.entropy, sol.iterations);
    }

    // Ultramodular copulas are negatively dependent, so only rho <= 0 is feasible.
    let udc = FamilySpec::new(Family::Udc, 4, 4, Space::Density, Form::Minimal);
    let sol = solve_maxent(&MaxEntProblem::new(udc.clone()).with_rho_target(-0.3)).unwrap();
    println!("udc 4, rho -0.3: entropy {:.6}, audit {:e}", sol.entropy, sol.audit(&udc.build().unwrap()));
    for row in sol.density.chunks(4) {
        println!("  {}", row.iter().map(|z| format!("{:.5}", z * 16.0)).collect::<Vec<_>>().join(" "));
    }
}
