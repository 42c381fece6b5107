//! JSON formats, scenarios and the `abvar` command line over `abvar-core`.

pub mod cli;
pub mod commands;
pub mod demo;
pub mod error;
pub mod format;
pub mod par;
pub mod report;
pub mod scenario;

pub use commands::Outcome;
pub use error::CliError;
