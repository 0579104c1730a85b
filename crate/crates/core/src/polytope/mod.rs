//! H- and V-representations of rational polytopes and the operations on them:
//! vertex enumeration, facet certification, membership and dimension.

mod dd;
mod elim;
pub mod io;
mod ops;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, Rational};

pub use dd::{double_description, DdOptions, InsertionOrder};
pub use elim::{reduce, AffineChart, ReducedRow, ReducedSystem};
pub use ops::{
    certify_minimal, contains, dimension, enumerate_vertices, enumerate_vertices_with, facet_vertex_incidence,
    inequality_keys,
    is_bounded, is_vertex, Certified, Membership,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not a member of the polytope")]
    NotMember,
    #[error("constraint has no nonzero coefficient")]
    DegenerateConstraint,
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Le,
    Ge,
    Eq,
}

/// `coeffs . x  (<= | >= | =)  rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub kind: ConstraintKind,
}

impl LinConstraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational, kind: ConstraintKind) -> Result<Self, PolytopeError> {
        if coeffs.iter().all(Rational::is_zero) {
            return Err(PolytopeError::DegenerateConstraint);
        }
        Ok(LinConstraint { coeffs, rhs, kind })
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self, PolytopeError> {
        Self::new(coeffs, rhs, ConstraintKind::Le)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self, PolytopeError> {
        Self::new(coeffs, rhs, ConstraintKind::Ge)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self, PolytopeError> {
        Self::new(coeffs, rhs, ConstraintKind::Eq)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = crate::exact::dot(&self.coeffs, x);
        match self.kind {
            ConstraintKind::Le => lhs <= self.rhs,
            ConstraintKind::Ge => lhs >= self.rhs,
            ConstraintKind::Eq => lhs == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        crate::exact::dot(&self.coeffs, x) == self.rhs
    }

    /// The constraint as `a.x <= b` (equalities keep their orientation).
    pub fn as_le(&self) -> (Vec<Rational>, Rational) {
        match self.kind {
            ConstraintKind::Ge => (self.coeffs.iter().map(|c| -c).collect(), -&self.rhs),
            _ => (self.coeffs.clone(), self.rhs.clone()),
        }
    }
}

/// Inequality/equality description of a polyhedron with a label per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    dim: usize,
    constraints: Vec<LinConstraint>,
    labels: Vec<String>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep { dim, constraints: Vec::new(), labels: Vec::new() }
    }

    /// Appends a constraint. Panics if its length differs from `dim`.
    pub fn push(&mut self, c: LinConstraint, label: impl Into<String>) {
        self.try_push(c, label).expect("constraint length matches ambient dimension");
    }

    pub fn try_push(&mut self, c: LinConstraint, label: impl Into<String>) -> Result<(), PolytopeError> {
        if c.coeffs.len() != self.dim {
            return Err(PolytopeError::DimensionMismatch { expected: self.dim, found: c.coeffs.len() });
        }
        self.constraints.push(c);
        self.labels.push(label.into());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LinConstraint, &str)> {
        self.constraints.iter().zip(self.labels.iter().map(String::as_str))
    }

    pub fn inequality_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.kind != ConstraintKind::Eq).count()
    }

    pub fn equality_count(&self) -> usize {
        self.len() - self.inequality_count()
    }

    /// Labels of the inequality rows, in order.
    pub fn inequality_labels(&self) -> Vec<&str> {
        self.iter().filter(|(c, _)| c.kind != ConstraintKind::Eq).map(|(_, l)| l).collect()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Subsystem keeping rows for which `keep(index)` holds.
    pub fn filtered(&self, mut keep: impl FnMut(usize) -> bool) -> HRep {
        let mut out = HRep::new(self.dim);
        for (i, (c, l)) in self.iter().enumerate() {
            if keep(i) {
                out.constraints.push(c.clone());
                out.labels.push(l.to_string());
            }
        }
        out
    }

    /// Appends every row of `other`.
    pub fn extend_from(&mut self, other: &HRep) {
        assert_eq!(self.dim, other.dim);
        self.constraints.extend(other.constraints.iter().cloned());
        self.labels.extend(other.labels.iter().cloned());
    }

    /// Applies `f` to every label.
    pub fn relabel(&mut self, f: impl Fn(&str) -> String) {
        for l in &mut self.labels {
            *l = f(l);
        }
    }
}

/// Vertex list of a polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
}

impl VRep {
    /// Builds a vertex list, sorting lexicographically and dropping duplicates.
    pub fn new(dim: usize, mut vertices: Vec<Vec<Rational>>) -> Result<Self, PolytopeError> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(PolytopeError::DimensionMismatch { expected: dim, found: v.len() });
        }
        vertices.sort();
        vertices.dedup();
        Ok(VRep { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_construction() {
        let z = Rational::zero();
        assert_eq!(
            LinConstraint::le(vec![z.clone(), z.clone()], Rational::one()),
            Err(PolytopeError::DegenerateConstraint)
        );
        assert_eq!(LinConstraint::eq(vec![z.clone()], z.clone()), Err(PolytopeError::DegenerateConstraint));
        let c = LinConstraint::ge(vec![Rational::one(), z], Rational::one()).unwrap();
        assert!(c.is_satisfied(&[Rational::from(2i64), Rational::from(7i64)]));
        assert!(!c.is_satisfied(&[Rational::zero(), Rational::zero()]));
        let mut h = HRep::new(3);
        assert!(matches!(h.try_push(c, "x"), Err(PolytopeError::DimensionMismatch { .. })));
    }

    #[test]
    fn vrep_dedups_and_sorts() {
        let a = vec![Rational::one(), Rational::zero()];
        let b = vec![Rational::zero(), Rational::one()];
        let v = VRep::new(2, vec![a.clone(), b.clone(), a.clone()]).unwrap();
        assert_eq!(v.vertices(), &[b, a.clone()]);
        assert!(v.contains_point(&a));
    }
}
