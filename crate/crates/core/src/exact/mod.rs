//! Exact rational scalars, linear algebra and linear programming.

mod lp;
mod matrix;
mod rational;

pub use lp::{le_rows, lp_solve, solve_rows, LeRow, LpResult, Sense};
pub use matrix::{bareiss_det, integer_rank, RatMatrix};
pub use rational::{common_denominator, dot, rat_normalize, to_primitive_integers, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
