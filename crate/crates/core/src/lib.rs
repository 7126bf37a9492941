//! Sparse random hypergraph optimization and its Gaussian spin-glass
//! surrogates.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod combinatorics;
pub mod ensembles;
pub mod experiments;
pub mod error;
pub mod gaussian;
pub mod objectives;
pub mod par;
pub mod rng;
pub mod solvers;
pub mod stats;

pub use error::{Error, Result};
