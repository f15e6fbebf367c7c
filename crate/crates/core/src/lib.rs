//! Monogenic functions in the biharmonic plane: the algebra 𝔹, Schwartz-type
//! integrals for the half-plane and the unit disk, and solvers for the
//! (1-3)-problem and the main biharmonic problem.

// `!(x < y)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bialgebra;
pub mod cli;
pub mod disk;
pub mod error;
pub mod field;
pub mod halfplane;
pub mod kernel;
pub mod quadrature;
pub mod verification;
