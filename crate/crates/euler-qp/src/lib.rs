//! Exact symbolic engine for Euler continuants and double quasi-Poisson
//! brackets on the two-vertex quivers with `n` arrow pairs.
//!
//! The crate constructs the Hamiltonian double quasi-Poisson structure whose
//! multiplicative moment map is built from Euler continuants, and verifies
//! the defining identities mechanically: exactly in the free path algebra
//! where possible, and through a probabilistic generic-matrix oracle where
//! formal inverses appear.
//!
//! Start with the runnable examples (`cargo run --example ...`); the thin
//! `euler-qp` binary exposes the same capabilities as subcommands.

pub mod algebra;
pub mod continuants;
pub mod error;
pub mod expr;
pub mod factorization;
pub mod fusion;
pub mod gamma;
pub mod matrix;
pub mod tensor;

pub use algebra::{El, QuiverAlgebra, Rat};
pub use error::Error;
pub use gamma::Gamma;
pub use tensor::{T2, T3};

pub mod brackets;
pub mod derivations;
pub mod rep;
pub mod rep11;

#[cfg(test)]
pub(crate) mod test_util;
