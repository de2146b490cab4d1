//! Command-line driver for `cuspcenter`: parameter handling, JSON reports
//! and the class-census cache.

pub mod cache;
pub mod commands;
pub mod json;
pub mod report;

pub use commands::{run, Command, RunConfig};
pub use report::{Report, Status};
