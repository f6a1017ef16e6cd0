//! Command-line driver for hallforge.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 budget exceeded.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;

pub use config::{Cli, JobConfig};
pub use error::{CliError, CliResult};
