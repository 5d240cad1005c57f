//! Parameter sweeps, verification suites and reports over `pricebench-core`.

pub mod commands;
pub mod config;
pub mod suites;

use pricebench_core::Error;
use std::fmt;
use std::path::{Path, PathBuf};

pub use commands::{run, Artifacts};
pub use config::{Command, FileConfig, Format, OutputSpec, Params, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// A failed run: exit code plus a message naming the offending key when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub key: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn config(key: &str, message: String) -> Self {
        Self { code: EXIT_CONFIG, key: Some(key.to_string()), message }
    }

    pub fn numeric(message: String) -> Self {
        Self { code: EXIT_NUMERIC, key: None, message }
    }

    /// Core errors map to exit codes by kind; `key` names the parameter that fed the call.
    pub fn from_core(key: &str, e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Self { code: EXIT_BUDGET, key: Some(key.to_string()), message: e.to_string() },
            e if e.is_numeric() => Self { code: EXIT_NUMERIC, key: None, message: e.to_string() },
            e => Self::config(key, e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "{k}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

/// Path of a secondary artifact: `traj.csv` + `asymptotics.json` → `traj.asymptotics.json`.
pub fn sibling_path(primary: &Path, suffix: &str) -> PathBuf {
    let stem = primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    primary.with_file_name(format!("{stem}.{suffix}"))
}

/// Runs the config and writes its artifacts; returns the process exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let artifacts = match run(config) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    match write_artifacts(config, &artifacts) {
        Ok(()) => artifacts.status,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

pub fn write_artifacts(config: &RunConfig, artifacts: &Artifacts) -> Result<(), CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::config("output.path", format!("cannot write {}: {e}", p.display()));
    match &config.output.path {
        Some(path) => {
            std::fs::write(path, &artifacts.primary).map_err(|e| io(path, e))?;
            for (suffix, body) in &artifacts.extras {
                let p = sibling_path(path, suffix);
                std::fs::write(&p, body).map_err(|e| io(&p, e))?;
            }
        }
        None => {
            print!("{}", artifacts.primary);
            for (suffix, body) in &artifacts.extras {
                eprintln!("--- {suffix}");
                eprint!("{body}");
            }
        }
    }
    Ok(())
}
