//! Command-line front end for `spectra-core`: runs a command, wraps the
//! result in a versioned [`ResultRecord`] and renders it as JSON, CSV or text.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod record;
pub mod verify;

use std::fs;

pub use config::{Command, Level, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use record::{Payload, ResultRecord, SCHEMA_VERSION};

/// A finished run. `passed` is false when a verification check, a Table 1
/// cell or a per-`k` computation failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: ResultRecord,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let (payload, passed) = commands::dispatch(cfg)?;
    let record = ResultRecord {
        schema_version: SCHEMA_VERSION.to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        config: cfg.clone(),
        payload,
    };
    Ok(Outcome { record, passed })
}

/// Renders `record` and writes it to the configured path, or returns the
/// text for stdout when no path is set.
pub fn emit(record: &ResultRecord, cfg: &RunConfig) -> Result<Option<String>> {
    let text = output::render(record, cfg.output_format)?;
    match &cfg.output_path {
        Some(p) => {
            fs::write(p, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
