//! Lévy processes, their potential kernels, and Kato-class membership of potentials.

pub mod classify;
pub mod config;
pub mod error;
pub mod kato;
pub mod levy;
pub mod montecarlo;
pub mod potential;
pub mod quad;
pub mod util;

pub use error::{Error, Result};
