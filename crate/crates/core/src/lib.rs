//! Lebesgue constants of anisotropically dilated simplices.
//!
//! The partial Fourier sum over `{k ≥ 0 : Σ k_j / n_j ≤ 1}` has Dirichlet
//! kernel `D_n`; this crate evaluates it and its companions `F_n`, `S_n`,
//! `R_n`, computes their L1 norms on the torus, and compares them against
//! the asymptotic predictors.

pub mod asymptotics;
pub mod error;
pub mod irrational;
pub mod kernel;
pub mod norm;
pub mod run;
pub mod simplex;

pub use error::{Error, Result};
