//! Library side of the `bcv` command: argument handling, the four commands,
//! and csv/json/markdown rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod render;

pub use commands::{run, run_classify, run_compare, run_distribution, run_tables};
pub use config::{config_from_args, parse_range, CommandKind, RunConfig};
pub use error::CliError;
pub use render::{Cell, OutputFormat, Report};
