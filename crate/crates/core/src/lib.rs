//! Exact computational models of derivators.
//!
//! Two models are provided. [`repmodel`] holds diagrams of finite-dimensional
//! vector spaces over finite categories with strict Kan extensions given by
//! Kan's formula. [`stablemodel`] holds diagrams of bounded chain complexes
//! over finite posets with homotopy Kan extensions computed by
//! (co)simplicial replacement; it is stable, and the triangulated structure on
//! its values is computed explicitly.
//!
//! All arithmetic is exact. The models are generic over a [`Field`]; the
//! rational instances are exported as type aliases.

pub mod document;
pub mod error;
pub mod exactlin;
pub mod fincat;
pub mod repmodel;
pub mod stablemodel;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use exactlin::{Field, Fp, Matrix, Rational};
pub use verdict::Verdict;

/// The rational numbers.
pub type Q = Rational;
/// Rational matrix.
pub type QMatrix = Matrix<Q>;
