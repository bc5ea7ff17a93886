//! Exact rational scalars and dense rational matrices.
//!
//! The centerpiece is [`Matrix::rref`]: a canonical Gauss-Jordan reduction
//! that returns the reduced row echelon form `R`, an invertible transform `E`
//! with `E * A = R`, the rank, and a count of the arithmetic work performed.
//! Everything downstream (rank tests, inverses, column complements, basis
//! extraction) is built on it.

mod matrix;
mod rational;

pub use matrix::{Matrix, MatrixError, RrefResult};
pub use rational::{ParseRationalError, Rational};
