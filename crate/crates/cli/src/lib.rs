//! Configuration, suite runner and report emitters behind the `g2contact`
//! command.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{ConfigFile, Overrides, RunConfig, Suite, Tolerances};
pub use error::CliError;
pub use report::{emit, render, Format, Report};
pub use run::run;
