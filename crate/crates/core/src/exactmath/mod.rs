//! Exact arithmetic substrate: ordered-field scalars, dense matrices, and
//! graded polynomial spaces.

pub mod matrix;
pub mod poly;
pub mod scalar;

pub use matrix::{dot, rank_of_rows, rref, EchelonBasis, ExactMatrix, Vector};
pub use poly::{monomial_basis, poly_dim, restrict_polynomial, GradedPolySpace, Poly};
pub use scalar::{FieldScalar, Rat};
