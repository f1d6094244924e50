//! Exact number-theoretic machinery for the equation `x^2 + 19^m = y^n`.
//!
//! Everything here is `no_std` with `alloc`: big-integer primitives, arithmetic
//! in the imaginary quadratic rings `Z[i]`, `Z[sqrt(-d)]` and their half-integer
//! orders, Pell/Lucas sequences, the congruence obstruction sieve, the bounded
//! solution search and the case engine that assembles proof certificates.
//!
//! File formats, the command line and anything touching the OS live in the
//! companion `rn19` crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod caseengine;
pub mod error;
pub mod pell;
pub mod quadring;
pub mod search;
pub mod sieve;

pub use error::{Error, Result};
pub use num_bigint::BigInt as Integer;
