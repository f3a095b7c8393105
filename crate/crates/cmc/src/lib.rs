//! File formats, command-line interface and multi-threaded Monte Carlo for
//! [`cmc_core`].

pub mod cli;
pub mod data;
pub mod error;
pub mod parallel;
pub mod report;
pub mod tables;

pub use error::{CliError, Result};
