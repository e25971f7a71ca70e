//! Command-line driver: configuration, argument parsing and the commands
//! behind the `maglab` binary.

pub mod args;
pub mod config;
pub mod run;

pub use config::{CommandName, RunConfig, Tolerances};
pub use run::{execute, run_cli, Failure};
