//! Spherical Dirac operators and Gegenbauer-based Cauchy kernels on domains
//! of the unit sphere `S^{n-1} ⊂ R^n`, with the associated Teodorescu,
//! Cauchy and π transforms and solvers for spherical Beltrami equations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod clifford;
pub mod error;
pub mod field;
pub mod geometry;
pub mod identities;
pub mod jet;
pub mod kernel;
pub mod operators;
pub mod pi_operator;
pub mod solvers;
pub mod special;
pub mod transforms;

pub use clifford::Multivector;
pub use error::{Error, Result};
pub use num_complex::Complex64;
