//! Numerical workbench for harmonic forms on rank-one locally symmetric
//! spaces: sphere geometry, Price decay factors, cusp lattices, cusp forms,
//! matrix-coefficient ODEs and Betti-number bound calculators.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod cusp_forms;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod matrix_coeff;
pub mod ode;
pub mod price;
pub mod quad;

pub use error::{Error, Result};
