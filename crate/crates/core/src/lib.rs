//! Multi-photon Hong–Ou–Mandel interference on a variable beam splitter.
//!
//! The crate treats a two-mode Fock state `|l, S-l⟩` hitting a beam splitter
//! of reflectivity `r` as a one-step continuous-time quantum walk on `S + 1`
//! sites, and as the single-excitation dynamics of a chiral XY spin chain
//! with couplings `J_n = ½·√(n(S+1-n))`.
//!
//! Modules:
//!
//! - [`kravchuk`]: stable Kravchuk functions and beam-splitter amplitudes.
//! - [`fock_walk`]: the walk itself (Hamiltonian, evolution, distributions,
//!   variances, perfect state transfer).
//! - [`spin_chain`]: SSH and generalised-SSH chains, eigen-solver, edge modes.
//! - [`topology`]: Altland–Zirnbauer classification of chain Hamiltonians.
//! - [`decoherence`]: partially distinguishable inputs.
//! - [`photonics_mc`]: Monte-Carlo model of the heralded photon-counting
//!   experiment.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the `fockwalk` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decoherence;
mod error;
pub mod fock_walk;
pub mod kravchuk;
pub mod linalg;
mod math;
pub mod photonics_mc;
pub mod spin_chain;
pub mod topology;

pub use error::{Error, Result};
pub use num_complex::Complex64;
