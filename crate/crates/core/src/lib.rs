//! Dyadic-order fractional quantum transforms.
//!
//! A unitary `U` with `U^{2^n} = I` can be fractionalized as
//! `FrU(α) = Σ_k c_k(α) U^k`. This crate builds the ancilla circuit that
//! realizes that sum coherently, instantiates it for the Fourier, Hartley
//! and type-I/IV cosine-sine transforms, and checks every construction
//! against dense oracles and a statevector simulator.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod fractional;
pub mod linalg;
pub mod simulator;
pub mod transforms;

pub use error::{Error, Result};
