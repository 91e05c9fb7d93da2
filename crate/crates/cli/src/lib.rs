//! Command-line front end for the envelope-theory solver.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod tables;

pub use config::{Format, RunConfig};
pub use error::{CliError, CliResult};
