//! Exact computations with twisted complexes over finite simplicial sets.
//!
//! The crate is organised bottom-up: [`linalg`] provides exact scalars,
//! matrices and chain complexes; [`simplicial`] the truncated simplicial
//! sets and homotopies; [`cech`] the bigraded cochain calculus; [`twisted`]
//! twisted complexes and their morphisms; [`ainf`] A∞-prenatural
//! transformations and the transformation induced by a homotopy.

pub mod ainf;
pub mod bundle;
pub mod cech;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod mutation;
pub mod random;
pub mod report;
pub mod simplicial;
pub mod twisted;
pub mod validation;
pub mod verify;

pub use error::{Error, Result};
