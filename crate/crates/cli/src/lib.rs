//! Command-line front end: MatrixMarket input, table/JSON/CSV reports.

pub mod args;
pub mod mtx;
pub mod output;
pub mod run;

pub use args::Cli;
pub use run::{run, CliError};
