//! Configuration parsing and report generation for the `drp-lab` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod svg;
pub mod verify;

pub use commands::{
    analyze_report, compare_report, drp_report, simulate_report, CompareFlag, CompareReport,
};
pub use config::{parse_config, RunConfig, SchemeSelector};
pub use error::{CliError, CliResult};
pub use verify::{verify, VerifyOptions, VerifyReport};
