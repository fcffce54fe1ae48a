//! Weighted isosymmetric operators on finite-dimensional spaces.
//!
//! For a positive semidefinite weight `A` and an operator `T`, the crate
//! evaluates the isometric, symmetric and isosymmetric brackets, expands them
//! symbolically, classifies operators by the orders they satisfy, searches
//! for admissible weights and runs numerical checks of the structural
//! identities relating these brackets.

// `!(x > 0.0)` guards also reject NaN; row operations read best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod mat;
pub mod bracket;
pub mod symbolic;
pub mod genlib;
pub mod classify;
pub mod admissible;
pub mod lab;
