//! Command-line front end for `nctorus-core`: run configuration, verification suites,
//! reports and the JSON table format.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;
pub mod tables;

pub use config::{parse_matrix, RunConfig};
pub use error::{CliError, Result};
pub use report::{Check, Report, Status};
pub use suites::run_suite;
