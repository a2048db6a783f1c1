//! Scenario runner, sweeps, summary table and verifier built on `cvqss-core`.

pub mod config;
pub mod error;
pub mod report;
pub mod scenario;
pub mod table;
pub mod tv_curve;
pub mod verify;

pub use error::{CliError, Result};
