//! Local models for twisted S-sheaves of polarized variations of Hodge
//! structure on normal crossing boundaries.

pub mod algebra;
pub mod cks;
pub mod cli;
pub mod corpus;
pub mod l2;
pub mod prolongation;
pub mod resolution;
pub mod ssheaf;
pub mod weight;
