//! Library side of the `duopos` command.

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;

pub use config::{CommandKind, Format, RunConfig};
pub use error::CliError;
