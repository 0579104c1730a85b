//! Library results checked against independent, slower computations.

mod common;

use std::collections::BTreeSet;

use dcopula::copula_ops::{checkerboard_eval, is_convex_quasi, is_discrete_copula, is_quasi, is_ultramodular, spearman_rho, ExtensionQuery};
use dcopula::exact::{dot, Rational};
use dcopula::families::{Family, FamilySpec, Form, Space};
use dcopula::maxent::{rho_functional, solve_maxent, MaxEntProblem};
use dcopula::polytope::enumerate_vertices;
use dcopula::transforms::{apply_t, apply_t_inv, decompose, DensityMatrix, GridMatrix};

#[test]
fn double_description_matches_brute_force() {
    for family in [Family::Udc, Family::Cdq, Family::Dc, Family::Dq] {
        for (p, q) in [(2, 3), (3, 3)] {
            let h = FamilySpec::new(family, p, q, Space::Density, Form::Defining).build().unwrap();
            let dd: BTreeSet<Vec<Rational>> = enumerate_vertices(&h).unwrap().vertices().iter().cloned().collect();
            assert_eq!(dd, common::brute_force_vertices(&h), "{}:{p}x{q}", family.name());
        }
    }
}

#[test]
fn grid_and_density_vertices_correspond() {
    for family in [Family::Udc, Family::Cdq] {
        let grid = enumerate_vertices(&FamilySpec::new(family, 3, 4, Space::Grid, Form::Minimal).build().unwrap()).unwrap();
        let density = enumerate_vertices(&FamilySpec::new(family, 3, 4, Space::Density, Form::Minimal).build().unwrap()).unwrap();
        let mapped: BTreeSet<Vec<Rational>> =
            grid.vertices().iter().map(|c| apply_t(&GridMatrix::from_point(3, 4, c).unwrap()).unwrap().to_point()).collect();
        let direct: BTreeSet<Vec<Rational>> = density.vertices().iter().cloned().collect();
        assert_eq!(mapped, direct);
    }
}

fn bilinear_f64(c: &[Vec<f64>], u: f64, v: f64) -> f64 {
    let (p, q) = (c.len() - 1, c[0].len() - 1);
    let (su, sv) = (u * p as f64, v * q as f64);
    let (i, j) = ((su.floor() as usize).min(p - 1), (sv.floor() as usize).min(q - 1));
    let (a, b) = (su - i as f64, sv - j as f64);
    (1.0 - a) * (1.0 - b) * c[i][j] + (1.0 - a) * b * c[i][j + 1] + a * (1.0 - b) * c[i + 1][j] + a * b * c[i + 1][j + 1]
}

/// `12 * integral - 3` by the midpoint rule on an `n x n` mesh, exactly.
fn rho_midpoint_exact(g: &GridMatrix, n: i64) -> Rational {
    let mut s = Rational::zero();
    for a in 0..n {
        for b in 0..n {
            let q = ExtensionQuery::new(Rational::frac(2 * a + 1, 2 * n), Rational::frac(2 * b + 1, 2 * n)).unwrap();
            s += checkerboard_eval(g, &q);
        }
    }
    s * Rational::frac(12, n * n) - Rational::from(3i64)
}

#[test]
fn rho_against_quadrature() {
    let h = FamilySpec::new(Family::Udc, 3, 4, Space::Grid, Form::Minimal).build().unwrap();
    let v = enumerate_vertices(&h).unwrap();
    for x in v.vertices().iter().take(12) {
        let g = GridMatrix::from_point(3, 4, x).unwrap();
        let rho = spearman_rho(&g).unwrap();
        // the extension is bilinear on each cell, so a mesh refining the cells is exact
        assert_eq!(rho_midpoint_exact(&g, 12), rho);
        let c: Vec<Vec<f64>> = (0..=3).map(|i| (0..=4).map(|j| g.c(i, j).to_f64()).collect()).collect();
        let n = 1024;
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += bilinear_f64(&c, (a as f64 + 0.5) / n as f64, (b as f64 + 0.5) / n as f64);
            }
        }
        let approx = 12.0 * s / (n * n) as f64 - 3.0;
        assert!((approx - rho.to_f64()).abs() < 1e-6, "{approx} vs {rho}");
        let d = apply_t(&g).unwrap();
        assert_eq!(rho_functional(3, 4).evaluate_density(&d), rho);
    }
}

#[test]
fn rho_of_bounds() {
    for p in 2..=6 {
        let p2 = (p * p) as i64;
        assert_eq!(spearman_rho(&GridMatrix::w(p, p)).unwrap(), Rational::frac(1 - p2, p2));
        assert_eq!(spearman_rho(&GridMatrix::m(p, p)).unwrap(), Rational::frac(p2 - 1, p2));
        assert!(spearman_rho(&GridMatrix::pi(p, p + 1)).unwrap().is_zero());
    }
}

#[test]
fn decomposability_by_zero_corner() {
    let h = FamilySpec::new(Family::Udc, 4, 4, Space::Density, Form::Minimal).build().unwrap();
    let v = enumerate_vertices(&h).unwrap();
    let mut decomposable = 0;
    for x in v.vertices() {
        let d = DensityMatrix::from_point(4, 4, x).unwrap();
        let g = apply_t_inv(&d);
        let corner = (1..4).any(|k| g.c(k, 4 - k).is_zero());
        assert_eq!(decompose(&d).unwrap().is_decomposable(), corner);
        decomposable += usize::from(corner);
    }
    assert_eq!(decomposable, 13);
}

#[test]
fn containment_chains() {
    for (p, q) in [(3, 3), (3, 4), (4, 4)] {
        for x in enumerate_vertices(&FamilySpec::new(Family::Udc, p, q, Space::Grid, Form::Minimal).build().unwrap()).unwrap().vertices() {
            let g = GridMatrix::from_point(p, q, x).unwrap();
            assert!(is_discrete_copula(&g).ok);
            assert!(is_convex_quasi(&g).ok);
        }
        for x in enumerate_vertices(&FamilySpec::new(Family::Dc, p, q, Space::Grid, Form::Defining).build().unwrap()).unwrap().vertices() {
            assert!(is_quasi(&GridMatrix::from_point(p, q, x).unwrap()).ok);
        }
    }
}

#[test]
fn central_sign_matrix_is_quasi_not_copula() {
    let asm = DensityMatrix::from_i64_rows(&[&[0, 3, 0], &[3, -3, 3], &[0, 3, 0]]);
    let g = apply_t_inv(&asm);
    assert!(is_quasi(&g).ok);
    let dc = is_discrete_copula(&g);
    assert!(!dc.ok && !dc.violations.is_empty());
    assert!(!is_ultramodular(&g).ok);
    let h = FamilySpec::new(Family::Asm, 3, 3, Space::Density, Form::Defining).build().unwrap();
    assert!(enumerate_vertices(&h).unwrap().vertices().contains(&asm.to_point()));
}

/// Spearman's rho of a normalized row-major density, computed from the
/// cumulative table.
fn rho_of_z(z: &[f64], p: usize, q: usize) -> f64 {
    let mut c = vec![vec![0.0; q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            c[i][j] = z[(i - 1) * q + (j - 1)] + c[i - 1][j] + c[i][j - 1] - c[i - 1][j - 1];
        }
    }
    let mut s = 0.0;
    for i in 0..p {
        for j in 0..q {
            s += c[i][j] + c[i + 1][j] + c[i][j + 1] + c[i + 1][j + 1];
        }
    }
    3.0 * s / (p * q) as f64 - 3.0
}

/// Maximum entropy with fixed uniform margins and a fixed rho: an exponential
/// tilt `exp(theta r_ij)` scaled to the margins, with `theta` found by bisection.
fn tilted_sinkhorn(p: usize, rho: f64) -> Vec<f64> {
    let n = p * p;
    let base = rho_of_z(&vec![0.0; n], p, p);
    let r: Vec<f64> = (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            rho_of_z(&e, p, p) - base
        })
        .collect();
    let scaled = |theta: f64| {
        let k: Vec<f64> = r.iter().map(|r| (theta * r).exp()).collect();
        let (mut a, mut b) = (vec![1.0; p], vec![1.0; p]);
        let m = 1.0 / p as f64;
        for _ in 0..20_000 {
            for i in 0..p {
                a[i] = m / (0..p).map(|j| k[i * p + j] * b[j]).sum::<f64>();
            }
            for j in 0..p {
                b[j] = m / (0..p).map(|i| k[i * p + j] * a[i]).sum::<f64>();
            }
        }
        (0..n).map(|idx| a[idx / p] * k[idx] * b[idx % p]).collect::<Vec<f64>>()
    };
    let (mut lo, mut hi) = (-60.0, 60.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rho_of_z(&scaled(mid), p, p) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    scaled(0.5 * (lo + hi))
}

#[test]
fn maxent_against_tilted_scaling() {
    let spec: FamilySpec = "birkhoff:3".parse().unwrap();
    let sol = solve_maxent(&MaxEntProblem::new(spec).with_rho_target(0.5)).unwrap();
    let oracle = tilted_sinkhorn(3, 0.5);
    for (a, b) in sol.density.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-6, "{:?} vs {:?}", sol.density, oracle);
    }
    let entropy: f64 = -oracle.iter().map(|z| z * z.ln()).sum::<f64>();
    assert!((entropy - sol.entropy).abs() < 1e-6);
    assert!((rho_of_z(&sol.density, 3, 3) - 0.5).abs() < 1e-7);
}

#[test]
fn rho_functional_against_cumulative_formula() {
    for (p, q) in [(2, 2), (3, 4), (5, 2)] {
        let f = rho_functional(p, q);
        let n = p * q;
        for k in 0..n {
            let mut z = vec![Rational::zero(); n];
            z[k] = Rational::one();
            let zf: Vec<f64> = z.iter().map(|r| r.to_f64()).collect();
            assert!((f.evaluate(&z).to_f64() - rho_of_z(&zf, p, q)).abs() < 1e-12);
        }
        assert_eq!(dot(&f.coeffs, &vec![Rational::zero(); n]) + &f.offset, Rational::from(-3i64));
    }
}
