//! Computation and verification toolkit for the Dirac complex of two vector variables
//! on `ℝ^{2n}`: spinor gamma matrices, the operators `D0, D1, D2` and their Hodge
//! Laplacians in exact arithmetic, principal symbols, the biharmonic and
//! Bochner–Martinelli kernels, grid fields, and the integral formulas built on them.

pub mod cli;
pub mod clifford;
pub mod diffop;
pub mod error;
pub mod field;
pub mod integrate;
pub mod kernels;
pub mod matrix;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod symbols;

pub use error::{Error, Result};
