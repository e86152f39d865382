//! Experiment runner behind the `briesz` executable.
//!
//! [`config`] builds a validated [`ExperimentConfig`], [`runners`] turns it
//! into a [`Report`], and [`emit`] renders the report to a file or stdout.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;
pub mod runners;

pub use config::{Experiment, ExperimentConfig, Method, OutputFormat, Overrides};
pub use error::{CliError, Result};
pub use report::{Cell, Report};
pub use runners::run;

/// Render `report` in the configured format; written atomically to `out` if set.
/// Returns the rendered text.
pub fn emit(cfg: &ExperimentConfig, report: &Report) -> Result<String> {
    let text = report.render(cfg.format)?;
    if let Some(path) = &cfg.out {
        report::write_atomic(path, &text)?;
    }
    Ok(text)
}
