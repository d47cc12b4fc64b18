//! Scenario runner and sweep driver behind the `ballfix` binary.

pub mod report;
pub mod scenario;
pub mod sweeps;

use std::path::Path;
use std::time::Instant;

use thiserror::Error;

pub use report::{Format, RunReport, Status};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Sweep(#[from] ballfix::sweep::SweepError),
}

impl InputError {
    pub const EXIT_CODE: u8 = 2;
}

pub fn run_scenario(path: &Path) -> Result<RunReport, InputError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut report = scenario::run_text(&text, &path.display().to_string())?;
    report.elapsed = started.elapsed();
    Ok(report)
}
