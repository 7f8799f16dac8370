//! Exact linear algebra over Q.
//!
//! Everything here is exact: floor formulas and valuation inequalities
//! downstream are discontinuous in their inputs, so no floating point is
//! allowed to leak into them.

mod matrix;
mod rat;
mod subspace;

pub use matrix::{RatMatrix, RatVector};
pub use rat::{rat, ParseRatError, Rat};
pub use subspace::{image, kernel, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix rows")]
    Ragged,
}
