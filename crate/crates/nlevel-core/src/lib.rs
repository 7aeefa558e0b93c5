//! Numerical study of n-level densities of low-lying zeros of primitive
//! Dirichlet L-functions against their random-matrix (CUE) predictions:
//! exact combinatorics over the set-partition lattice, piecewise-polynomial
//! test-function algebra, L-function zero computation, the explicit
//! formula, the asymptotic-large-sieve main term, and CUE statistics.

pub mod cache;
pub mod dirichlet;
pub mod error;
pub mod ntstat;
pub mod partition;
pub mod poly;
pub mod prediction;
pub mod primes;
pub mod quad;
pub mod rmt;
pub mod special;
pub mod testfn;
pub mod weight;
pub mod zeros;

pub use error::Error;
