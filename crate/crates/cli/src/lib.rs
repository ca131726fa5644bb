//! Command implementations behind the `hyperent` binary.
//!
//! Every command returns its output as a string so tests can call it
//! directly; the binary only handles argument parsing, file output and exit
//! codes (see [`CliError::exit_code`]).

pub mod commands;
mod error;
pub mod files;
pub mod json;

pub use error::CliError;
