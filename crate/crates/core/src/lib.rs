//! Computational companion for the arithmetic of even unimodular lattices.
//!
//! The crate is organised by subject:
//!
//! - [`qseries`]: exact truncated q-expansions (Eisenstein series, Δ, theta
//!   constants, Hecke operators).
//! - [`dims`]: dimension formulas for modular and cusp forms on SL₂(ℤ) and
//!   Γ₀(2), with a monomial-counting oracle and the master table.
//! - [`codes`]: binary linear codes, Type II checks, weight enumerators and
//!   the theta-constant substitution.
//! - [`lattices`]: integral lattices, Construction A, shell enumeration,
//!   theta series and densities.
//! - [`lpbound`]: a numerical linear-programming bound for sphere packing
//!   density over a Laguerre–Gaussian radial basis.
//! - [`quasicrystal`]: the Fibonacci Hamiltonian, its spectrum, gap labels
//!   and level-spacing statistics.

pub mod codes;
pub mod dims;
mod error;
pub mod lattices;
pub mod lpbound;
pub mod qseries;
pub mod quasicrystal;

pub use error::{Error, Result};
