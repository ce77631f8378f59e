//! Command-line front end for the cbqsdc simulator: batch runs, table
//! verification, attack sweeps and transcript files.

pub mod args;
pub mod error;
pub mod report;
pub mod runner;
pub mod transcript_io;

pub use args::{Cli, CliConfig, Command, ReportFormat};
pub use error::CliError;
