use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eig,
    Minimize,
    Table1,
    Bounds,
    Limit,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    #[default]
    Fast,
    Full,
}

/// Table 1 cells further than this from the reference values are flagged.
pub const TABLE_TOLERANCE: f64 = 0.01;
pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_JMAX: u32 = 3;

/// Everything a run depends on. Echoed into every [`crate::ResultRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub k_list: Vec<u32>,
    pub alpha: Option<f64>,
    pub j_max: u32,
    pub eps: Option<f64>,
    /// Overrides [`TABLE_TOLERANCE`].
    pub tolerance: Option<f64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub cache_path: Option<PathBuf>,
    pub level: Level,
}

impl RunConfig {
    /// A configuration with the command's default `k` list.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            k_list: default_k_list(command),
            alpha: None,
            j_max: DEFAULT_JMAX,
            eps: None,
            tolerance: None,
            output_format: OutputFormat::Json,
            output_path: None,
            cache_path: None,
            level: Level::Fast,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.k_list.is_empty() {
            return bad("k list must not be empty".into());
        }
        if self.k_list.contains(&0) {
            return bad("k must be at least 1".into());
        }
        if self.j_max == 0 {
            return bad("jmax must be at least 1".into());
        }
        if let Some(a) = self.alpha {
            if !a.is_finite() {
                return bad(format!("alpha must be finite, got {a}"));
            }
        }
        if let Some(e) = self.eps {
            if !(e > 0.0 && e < 1.0) {
                return bad(format!("eps must lie in (0, 1), got {e}"));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tolerance must be positive, got {t}"));
            }
        }
        match self.command {
            Command::Eig if self.alpha.is_none() => bad("eig needs --alpha".into()),
            Command::Limit if self.alpha.is_some_and(|a| a < 0.0) => bad("limit needs alpha >= 0".into()),
            _ => Ok(()),
        }
    }

    pub fn table_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(TABLE_TOLERANCE)
    }

    pub fn eps_or_default(&self) -> f64 {
        self.eps.unwrap_or(DEFAULT_EPS)
    }
}

/// `k` values used when `--k` is not given.
pub fn default_k_list(command: Command) -> Vec<u32> {
    match command {
        Command::Table1 | Command::Verify => (1..=10).collect(),
        Command::Bounds => (3..50).step_by(2).collect(),
        Command::Limit => vec![200],
        Command::Eig | Command::Minimize => vec![1],
    }
}

/// Parses `1,3,5` and ranges such as `3..9` or `3..9:2` (end inclusive).
pub fn parse_k_list(s: &str) -> Result<Vec<u32>> {
    let bad = || CliError::Config(format!("cannot parse k list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((h, st)) => (h, st.parse::<usize>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let lo: u32 = lo.parse().map_err(|_| bad())?;
            let hi: u32 = hi.parse().map_err(|_| bad())?;
            if step == 0 || hi < lo {
                return Err(bad());
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
