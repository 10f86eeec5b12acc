//! Spectral statistics of real symmetric palindromic Toeplitz ensembles.
//!
//! An `N x N` matrix of degree `n` is built from `N / 2^(n+1)` independent
//! entries and is palindromic on each of its `2^n` blocks. The crate samples
//! these ensembles, computes eigenvalue moments, enumerates the pair
//! matchings behind the moment expansion exactly, and extrapolates finite-`N`
//! averages to the limit.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod estimation;
pub mod matchings;
pub mod parallel;
pub mod spectra;

pub use error::{Error, Result};
