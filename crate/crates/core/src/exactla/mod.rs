//! Exact linear algebra over the integers and rationals.
//!
//! Everything here is generic over the scalar traits in [`crate::scalar`], so
//! the same routines run on `i64` for quick experiments and on `BigInt` for
//! the real computations, where entry growth is never a concern.

mod hnf;
mod kernel;
mod matrix;
mod rational;
mod signature;
mod snf;

use thiserror::Error;

pub use hnf::{hermite_normal_form, reduce_modulo_rows, row_lattice_basis, HnfResult};
pub use kernel::{integer_kernel, solve_integral};
pub use matrix::{dot, unit_vector, vec_add, vec_scale, vec_sub, Matrix};
pub use rational::{determinant, inverse, rank};
pub use signature::{congruence_signature, signature, Signature};
pub use snf::{invariant_factors, smith_normal_form, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
}
