//! Exact-arithmetic construction and certification of matrices of linear
//! forms of constant rank on projective space.
//!
//! The library builds the matrices attached to globally generated vector
//! bundles on `P^n` (quotient-bundle contractions, Steiner and Drézet
//! presentations, Pfaffian and mixed extensions, evaluation-kernel models)
//! and certifies, with deterministic algebraic certificates, that a matrix
//! of linear forms has constant rank away from the origin.
//!
//! Everything is computed over an exact field: arbitrary-precision
//! rationals by default, or a prime field `F_p` as a fast screening mode.

pub mod certify;
pub mod chern;
pub mod corpus;
pub mod doc;
pub mod error;
pub mod experiments;
pub mod generation;
pub mod ideals;
pub mod multivector;
pub mod parse;
pub mod poly;
pub mod linalg;
pub mod model;
pub mod scalar;

pub use error::Error;
pub use scalar::{Field, Scalar};
