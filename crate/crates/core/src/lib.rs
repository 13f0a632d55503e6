//! Exact operator algebra, covariant two-point functions and numerical
//! models for the dynamical symmetries of ageing and non-equilibrium scaling.

pub mod error;
pub mod exprfn;
pub mod models;
pub mod opalg;
pub mod reps;
pub mod structure;

pub use error::{Error, Result};
