//! Command-line front end for `carleman-core`.
//!
//! A run reads a JSON configuration, applies command-line overrides and
//! emits one self-describing report in JSON or CSV. Reports are
//! deterministic: the same inputs give byte-identical output.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{run, Command, Outcome};
pub use config::{Format, Overrides, RunConfig, Settings};
pub use error::{CliError, Result};
