//! File formats, configuration and commands behind the `tdhf` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod suites;

pub use commands::{cmd_compress, cmd_run, cmd_scf, cmd_verify, CliError};
pub use config::{ConfigLayer, RunConfig};
