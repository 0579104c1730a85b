//! Exact polyhedral toolkit for discrete copulas and their relatives.

pub mod exact;
pub mod polytope;
pub mod families;
pub mod transforms;
pub mod copula_ops;
pub mod census;
pub mod maxent;
