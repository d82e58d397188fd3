//! Command-line front end: simulations, formulas, sweeps and fits written as CSV, JSON or SVG.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod series;
pub mod svg;

pub use commands::{execute, run, Output};
pub use config::RunConfig;
pub use error::CliError;
