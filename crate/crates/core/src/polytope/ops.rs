use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::exact::{dot, solve_rows, LeRow, LpResult, Rational, Sense};

use super::dd::{double_description, DdOptions, InsertionOrder};
use super::elim::{reduce, ReducedSystem};
use super::{ConstraintKind, HRep, PolytopeError, VRep};

/// Result of an exact membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub inside: bool,
    pub violated: Vec<String>,
}

/// Irredundant system together with the labels of the dropped rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub minimal: HRep,
    pub removed: Vec<String>,
}

impl Certified {
    pub fn facet_count(&self) -> usize {
        self.minimal.inequality_count()
    }
}

pub fn contains(h: &HRep, x: &[Rational]) -> Result<Membership, PolytopeError> {
    if x.len() != h.dim() {
        return Err(PolytopeError::DimensionMismatch { expected: h.dim(), found: x.len() });
    }
    let violated: Vec<String> = h.iter().filter(|(c, _)| !c.is_satisfied(x)).map(|(_, l)| l.to_string()).collect();
    Ok(Membership { inside: violated.is_empty(), violated })
}

/// Vertex test: the active constraint normals span the reduced space.
pub fn is_vertex(h: &HRep, x: &[Rational]) -> Result<bool, PolytopeError> {
    if !contains(h, x)?.inside {
        return Err(PolytopeError::NotMember);
    }
    let red = reduce(h)?;
    let k = red.chart.reduced_dim();
    if k == 0 {
        return Ok(true);
    }
    let y = red.chart.project(x);
    let active: Vec<Vec<BigInt>> = red
        .rows
        .iter()
        .filter(|r| dot(&r.coeffs, &y) == r.rhs)
        .map(|r| crate::exact::to_primitive_integers(&r.coeffs))
        .collect();
    if active.len() < k {
        return Ok(false);
    }
    Ok(crate::exact::integer_rank(active, k) == k)
}

fn check_bounded(red: &ReducedSystem) -> Result<(), PolytopeError> {
    let k = red.chart.reduced_dim();
    let rows = red.le_rows();
    for i in 0..k {
        let mut c = vec![Rational::zero(); k];
        c[i] = Rational::one();
        for sense in [Sense::Max, Sense::Min] {
            match solve_rows(&c, &rows, k, sense) {
                LpResult::Infeasible => return Err(PolytopeError::EmptyPolytope),
                LpResult::Unbounded => return Err(PolytopeError::Unbounded),
                LpResult::Optimal { .. } => {}
            }
        }
    }
    Ok(())
}

/// True iff `h` describes a bounded set. Fails on empty input.
pub fn is_bounded(h: &HRep) -> Result<bool, PolytopeError> {
    let red = reduce(h)?;
    match check_bounded(&red) {
        Ok(()) => Ok(true),
        Err(PolytopeError::Unbounded) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn enumerate_vertices(h: &HRep) -> Result<VRep, PolytopeError> {
    enumerate_vertices_with(h, &DdOptions::default())
}

pub fn enumerate_vertices_with(h: &HRep, opts: &DdOptions) -> Result<VRep, PolytopeError> {
    let red = reduce(h)?;
    check_bounded(&red)?;
    let k = red.chart.reduced_dim();
    if k == 0 {
        return VRep::new(h.dim(), vec![red.chart.lift(&[])]);
    }
    // Homogenized rows b t - a.y >= 0, preceded by t >= 0.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(red.rows.len() + 1);
    let mut unit = vec![BigInt::from(0); k + 1];
    unit[0] = BigInt::from(1);
    rows.push(unit);
    for r in &red.rows {
        let v: Vec<Rational> = std::iter::once(r.rhs.clone()).chain(r.coeffs.iter().map(|c| -c)).collect();
        rows.push(crate::exact::to_primitive_integers(&v));
    }
    let mut order: Vec<usize> = (1..rows.len()).collect();
    if opts.order == InsertionOrder::Lexicographic {
        let labels = h.labels();
        order.sort_by(|&a, &b| labels[red.rows[a - 1].source].cmp(&labels[red.rows[b - 1].source]));
    }
    order.insert(0, 0);
    let rays = double_description(&rows, &order);
    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        if ray[0] == BigInt::from(0) {
            return Err(PolytopeError::Unbounded);
        }
        let t = Rational::from(ray[0].clone());
        let y: Vec<Rational> = ray[1..].iter().map(|c| Rational::from(c.clone()) / &t).collect();
        vertices.push(red.chart.lift(&y));
    }
    if vertices.is_empty() {
        return Err(PolytopeError::EmptyPolytope);
    }
    VRep::new(h.dim(), vertices)
}

/// Drops every inequality implied by the ones retained so far, one row at a
/// time in input order, by exact LP. Tautologies after equality elimination
/// and linearly dependent equalities are dropped as well.
pub fn certify_minimal(h: &HRep) -> Result<Certified, PolytopeError> {
    let red = reduce(h)?;
    let k = red.chart.reduced_dim();
    let mut dropped = vec![false; h.len()];
    for &i in red.tautologies.iter().chain(&red.dependent_equalities) {
        dropped[i] = true;
    }
    let rows = red.le_rows();
    let mut retained = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<LeRow> =
            rows.iter().zip(&retained).enumerate().filter(|(j, (_, keep))| *j != i && **keep).map(|(_, (r, _))| r.clone()).collect();
        match solve_rows(&rows[i].coeffs, &others, k, Sense::Max) {
            LpResult::Optimal { value, .. } => {
                if value <= rows[i].rhs {
                    retained[i] = false;
                    dropped[red.rows[i].source] = true;
                }
            }
            LpResult::Unbounded => {}
            LpResult::Infeasible => return Err(PolytopeError::EmptyPolytope),
        }
    }
    let minimal = h.filtered(|i| !dropped[i]);
    let removed = h.labels().iter().zip(&dropped).filter(|(_, d)| **d).map(|(l, _)| l.clone()).collect();
    Ok(Certified { minimal, removed })
}

/// Affine dimension of the solution set of `h`.
pub fn dimension(h: &HRep) -> Result<usize, PolytopeError> {
    let red = reduce(h)?;
    let k = red.chart.reduced_dim();
    if red.rows.is_empty() {
        return Ok(k);
    }
    // max s subject to a.y + s <= b, s <= 1
    let mut rows: Vec<LeRow> = red
        .rows
        .iter()
        .map(|r| LeRow { coeffs: r.coeffs.iter().cloned().chain(std::iter::once(Rational::one())).collect(), rhs: r.rhs.clone() })
        .collect();
    let mut cap = vec![Rational::zero(); k + 1];
    cap[k] = Rational::one();
    rows.push(LeRow { coeffs: cap.clone(), rhs: Rational::one() });
    let slack = match solve_rows(&cap, &rows, k + 1, Sense::Max) {
        LpResult::Optimal { value, .. } => value,
        LpResult::Infeasible => return Err(PolytopeError::EmptyPolytope),
        LpResult::Unbounded => unreachable!("slack is capped"),
    };
    if slack.is_negative() {
        return Err(PolytopeError::EmptyPolytope);
    }
    if slack.is_positive() {
        return Ok(k);
    }
    let base = red.le_rows();
    let mut implicit = Vec::new();
    for r in &red.rows {
        if let LpResult::Optimal { value, .. } = solve_rows(&r.coeffs, &base, k, Sense::Min) {
            if value == r.rhs {
                implicit.push(crate::exact::to_primitive_integers(&r.coeffs));
            }
        }
    }
    Ok(k - crate::exact::integer_rank(implicit, k))
}

/// Canonical form of each inequality after equality elimination: the primitive
/// integer vector `(a, b)` of `a.y <= b` in the free coordinates. Two systems
/// with the same equalities describe the same facets iff these sets agree.
pub fn inequality_keys(h: &HRep) -> Result<BTreeSet<Vec<BigInt>>, PolytopeError> {
    let red = reduce(h)?;
    Ok(red
        .rows
        .iter()
        .map(|r| {
            let v: Vec<Rational> = r.coeffs.iter().cloned().chain(std::iter::once(r.rhs.clone())).collect();
            crate::exact::to_primitive_integers(&v)
        })
        .collect())
}

/// For each inequality of `h`, the indices of the vertices on which it is tight.
pub fn facet_vertex_incidence(h: &HRep, v: &VRep) -> Vec<(String, Vec<usize>)> {
    h.iter()
        .filter(|(c, _)| c.kind != ConstraintKind::Eq)
        .map(|(c, l)| {
            let tight = v.vertices().iter().enumerate().filter(|(_, x)| c.is_tight(x)).map(|(i, _)| i).collect();
            (l.to_string(), tight)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::LinConstraint;

    fn unit_square() -> HRep {
        let mut h = HRep::new(2);
        for i in 0..2 {
            let mut a = vec![Rational::zero(); 2];
            a[i] = Rational::one();
            h.push(LinConstraint::ge(a.clone(), Rational::zero()).unwrap(), format!("lo{i}"));
            h.push(LinConstraint::le(a, Rational::one()).unwrap(), format!("hi{i}"));
        }
        h
    }

    #[test]
    fn square_vertices_and_membership() {
        let h = unit_square();
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.len(), 4);
        for x in v.vertices() {
            assert!(is_vertex(&h, x).unwrap());
        }
        let half = Rational::frac(1, 2);
        assert!(contains(&h, &[half.clone(), half.clone()]).unwrap().inside);
        assert!(!is_vertex(&h, &[half, Rational::zero()]).unwrap());
        assert_eq!(dimension(&h).unwrap(), 2);
    }

    #[test]
    fn redundant_rows_are_removed() {
        let mut h = unit_square();
        h.push(LinConstraint::le(vec![Rational::one(), Rational::one()], Rational::from(3i64)).unwrap(), "loose");
        let cert = certify_minimal(&h).unwrap();
        assert_eq!(cert.removed, vec!["loose".to_string()]);
        assert!(certify_minimal(&cert.minimal).unwrap().removed.is_empty());
    }

    #[test]
    fn unbounded_and_flat() {
        let mut h = HRep::new(2);
        h.push(LinConstraint::ge(vec![Rational::one(), Rational::zero()], Rational::zero()).unwrap(), "x");
        assert_eq!(enumerate_vertices(&h), Err(PolytopeError::Unbounded));
        let mut seg = unit_square();
        seg.push(LinConstraint::le(vec![Rational::zero(), Rational::one()], Rational::zero()).unwrap(), "flat");
        assert_eq!(dimension(&seg).unwrap(), 1);
    }
}
