//! Experiment runner for `cfwgan-core`: sample and result files, a
//! multi-threaded sliced evaluator, and the `cfwgan` command line.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod parallel;
pub mod parse;

pub use error::{CliError, CliResult};
