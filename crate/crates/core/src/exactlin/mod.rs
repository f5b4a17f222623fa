//! Exact linear algebra over the rationals or a prime field.

mod matrix;
mod scalar;

pub use matrix::{Matrix, Rref};
pub use scalar::{Field, Fp, Rational};
