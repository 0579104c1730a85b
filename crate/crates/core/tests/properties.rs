mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use dcopula::copula_ops::{checkerboard_eval, spearman_rho, ExtensionQuery};
use dcopula::exact::{dot, lp_solve, Rational, Sense};
use dcopula::polytope::io::{hrep_from_json, hrep_to_json, parse_hrep_cdd, write_hrep_cdd};
use dcopula::polytope::{enumerate_vertices, ConstraintKind, HRep, LinConstraint};
use dcopula::transforms::{apply_t_inv, decompose, direct_sum, flip, recompose, second_difference, transpose_point, Decomposition, DensityMatrix, GridMatrix};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::frac(n, d))
}

fn density(p: usize, q: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(rational(), p * q).prop_map(move |x| DensityMatrix::from_point(p, q, &x).unwrap())
}

fn any_density() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(p, q)| density(p, q))
}

fn positive_square() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((1i64..=9, 1i64..=4), n * n)
            .prop_map(move |x| DensityMatrix::from_point(n, n, &x.iter().map(|&(a, b)| Rational::frac(a, b)).collect::<Vec<_>>()).unwrap())
    })
}

/// A discrete copula: the mean of `k` permutation matrices, as a grid.
fn copula(p: usize) -> impl Strategy<Value = GridMatrix> {
    prop::collection::vec(Just((0..p).collect::<Vec<usize>>()).prop_shuffle(), 1..4).prop_map(move |perms| {
        let k = perms.len() as i64;
        let mut x = vec![Rational::zero(); p * p];
        for perm in &perms {
            for (i, &j) in perm.iter().enumerate() {
                x[i * p + j] += Rational::frac(p as i64, k);
            }
        }
        apply_t_inv(&DensityMatrix::from_point(p, p, &x).unwrap())
    })
}

fn kind() -> impl Strategy<Value = ConstraintKind> {
    prop_oneof![Just(ConstraintKind::Le), Just(ConstraintKind::Ge), Just(ConstraintKind::Eq)]
}

fn hrep() -> impl Strategy<Value = HRep> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((prop::collection::vec(rational(), n), rational(), kind()), 0..6).prop_map(move |rows| {
            let mut h = HRep::new(n);
            for (k, (a, b, kind)) in rows.into_iter().enumerate() {
                if let Ok(c) = LinConstraint::new(a, b, kind) {
                    h.push(c, format!("row{k}"));
                }
            }
            h
        })
    })
}

/// The box `[-1, 1]^n` cut by random halfspaces that keep the origin inside.
fn bounded_polytope() -> impl Strategy<Value = HRep> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((prop::collection::vec(-4i64..=4, n), 1i64..=6), 0..5).prop_map(move |cuts| {
            let mut h = HRep::new(n);
            for i in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[i] = Rational::one();
                h.push(LinConstraint::le(e.clone(), Rational::one()).unwrap(), format!("up{i}"));
                h.push(LinConstraint::ge(e, Rational::from(-1i64)).unwrap(), format!("lo{i}"));
            }
            for (k, (a, b)) in cuts.into_iter().enumerate() {
                if let Ok(c) = LinConstraint::le(a.into_iter().map(Rational::from).collect(), Rational::frac(b, 2)) {
                    h.push(c, format!("cut{k}"));
                }
            }
            h
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cumulative_sums_invert_second_differences(d in any_density()) {
        let g = apply_t_inv(&d);
        prop_assert_eq!(second_difference(&g), d);
        prop_assert_eq!(apply_t_inv(&second_difference(&g)), g);
    }

    #[test]
    fn extension_interpolates_nodes_and_edges(g in (2usize..=4).prop_flat_map(copula), a in 0i64..=12, t in 0i64..=12) {
        let p = g.p() as i64;
        for i in 0..=g.p() {
            let u = Rational::frac(i as i64, p);
            for j in 0..g.q() {
                let lambda = Rational::frac(t, 12);
                let v = (Rational::from(j as i64) + &lambda) / Rational::from(p);
                let expected = (Rational::one() - &lambda) * g.c(i, j) + &lambda * g.c(i, j + 1);
                prop_assert_eq!(checkerboard_eval(&g, &ExtensionQuery::new(u.clone(), v.clone()).unwrap()), expected.clone());
                let transposed = transpose_point(&g);
                prop_assert_eq!(checkerboard_eval(&transposed, &ExtensionQuery::new(v, u.clone()).unwrap()), expected);
            }
        }
        let s = Rational::frac(a, 12);
        let q = ExtensionQuery::new(s.clone(), Rational::one()).unwrap();
        prop_assert_eq!(checkerboard_eval(&g, &q), s);
    }

    #[test]
    fn rho_is_affine_and_symmetric(a in copula(4), b in copula(4), alpha in 0i64..=8) {
        let alpha = Rational::frac(alpha, 8);
        let mixed = a.mix(&b, &alpha).unwrap();
        let (ra, rb) = (spearman_rho(&a).unwrap(), spearman_rho(&b).unwrap());
        prop_assert_eq!(spearman_rho(&mixed).unwrap(), &alpha * &ra + (Rational::one() - &alpha) * &rb);
        prop_assert_eq!(spearman_rho(&transpose_point(&a)).unwrap(), ra.clone());
        prop_assert!(ra.abs() <= Rational::one());
    }

    #[test]
    fn serialization_round_trips(h in hrep()) {
        prop_assert_eq!(&parse_hrep_cdd(&write_hrep_cdd(&h)).unwrap(), &h);
        prop_assert_eq!(&hrep_from_json(&hrep_to_json(&h)).unwrap(), &h);
    }

    #[test]
    fn direct_sums_decompose(b in positive_square(), d in positive_square(), e in positive_square()) {
        prop_assert_eq!(decompose(&direct_sum(&b, &d)).unwrap(), Decomposition::Blocks(vec![b.clone(), d.clone()]));
        let triple = direct_sum(&b, &direct_sum(&d, &e));
        match decompose(&triple).unwrap() {
            Decomposition::Blocks(blocks) => {
                prop_assert_eq!(blocks.len(), 3);
                prop_assert_eq!(recompose(&blocks).unwrap(), triple);
            }
            Decomposition::Indecomposable => prop_assert!(false, "triple sum reported indecomposable"),
        }
        prop_assert_eq!(decompose(&b).unwrap(), Decomposition::Indecomposable);
    }

    #[test]
    fn involutions(d in any_density()) {
        prop_assert_eq!(flip(&flip(&d)), d.clone());
        prop_assert_eq!(d.transpose().transpose(), d.clone());
        let g = apply_t_inv(&d);
        prop_assert_eq!(transpose_point(&transpose_point(&g)), g.clone());
        prop_assert_eq!(apply_t_inv(&d.transpose()), transpose_point(&g));
    }

    #[test]
    fn double_description_matches_brute_force(h in bounded_polytope()) {
        let dd: BTreeSet<Vec<Rational>> = enumerate_vertices(&h).unwrap().vertices().iter().cloned().collect();
        prop_assert_eq!(dd, common::brute_force_vertices(&h));
    }

    #[test]
    fn lp_optimum_is_attained_at_a_vertex(h in bounded_polytope(), c in prop::collection::vec(-5i64..=5, 3)) {
        let c: Vec<Rational> = c.into_iter().take(h.dim()).map(Rational::from).collect();
        let v = enumerate_vertices(&h).unwrap();
        let best = v.vertices().iter().map(|x| dot(&c, x)).max().unwrap();
        let max = lp_solve(&c, &h, Sense::Max).unwrap();
        prop_assert_eq!(max.value(), Some(&best));
        let min = lp_solve(&c, &h, Sense::Min).unwrap();
        let worst = v.vertices().iter().map(|x| dot(&c, x)).min().unwrap();
        prop_assert_eq!(min.value(), Some(&worst));
    }
}
