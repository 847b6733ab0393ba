//! Exact linear algebra over ℚ and GF(p).

mod complex;
mod matrix;
mod scalar;
mod solve;

pub use complex::{ChainComplex, ChainMap, GradedModule};
pub use matrix::{Echelon, Matrix};
pub use scalar::{sign_positive, BaseRing, Scalar};
pub use solve::{solve_affine, LinearSystem};
