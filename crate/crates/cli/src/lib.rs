//! Command-line front end for the `x^2 + 19^m = y^n` toolkit, and the text
//! format used for certificates.

pub mod certfmt;
mod commands;
pub mod config;

pub use commands::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
