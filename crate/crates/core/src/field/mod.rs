//! Exact linear algebra over the rationals.

mod linalg;
mod matrix;
mod scalar;

pub use linalg::{
    independent_subset, kernel_basis, rank, rank_mod_p, rref, solve, DimensionMismatch, Rref, SpanSolver,
};
pub use matrix::{
    add_vectors, axpy, is_zero_vector, scale_vector, sub_vectors, unit_vector, zero_vector, Matrix, Vector,
};
pub use scalar::{ParseScalarError, Scalar};
