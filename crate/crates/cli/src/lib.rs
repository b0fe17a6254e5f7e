//! Command-line front end: configuration, the end-to-end run, and the CSV,
//! JSON and SVG artifacts it writes.

pub mod artifacts;
pub mod config;
pub mod run;
pub mod svg;

pub use config::{parse_config, Cli, RunConfig};
pub use run::{run_experiment, RunSummary, ARTIFACTS};
