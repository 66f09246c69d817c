//! Command-line front end: spec files in, JSON result documents and CSV
//! sweep tables out.

pub mod commands;
pub mod error;
pub mod output;
pub mod report;
pub mod spec;

pub use error::{CliError, ExitStatus};
pub use spec::RunSpec;
