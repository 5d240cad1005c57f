//! Run configuration: command, parameters and output, from a TOML file
//! and/or command-line flags (flags win).

use crate::CliError;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Geometry,
    Bounds,
    Ode,
    Lattice,
    Cusp,
    Report,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Plot,
}

macro_rules! params {
    ($($(#[$doc:meta])* $name:ident : $ty:ty),* $(,)?) => {
        /// Parameter map; every key is optional and validated by the command that uses it.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields, rename_all = "kebab-case")]
        pub struct Params {
            $($(#[$doc])* #[serde(default, skip_serializing_if = "Option::is_none")] pub $name: Option<$ty>,)*
        }

        impl Params {
            /// Keys set in `other` replace those in `self`.
            pub fn overlay(mut self, other: Params) -> Params {
                $(if other.$name.is_some() { self.$name = other.$name; })*
                self
            }
        }
    };
}

params! {
    space: String,
    n: u32,
    k: u32,
    tol: f64,
    #[serde(alias = "tEnd")]
    t_end: f64,
    seed: u64,
    budget: u64,
    group: String,
    suite: String,
    trials: u64,
    samples: u64,
    r_min: f64,
    r_max: f64,
    steps: usize,
    vol: f64,
    v_min: f64,
    inj: f64,
    cusp_vols: Vec<f64>,
    v_min_cusps: f64,
    deltas: Vec<f64>,
    nu: u32,
    radius: f64,
    basis: String,
    v: Vec<i64>,
    heights: Vec<f64>,
    n_max: u32,
    setting: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputSpec,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, params: Params::default(), output: OutputSpec::default() }
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }

    /// File settings first, then flags.
    pub fn merge(file: Option<FileConfig>, command: Option<Command>, flags: Params, output: OutputSpec) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let command = match (command, file.command) {
            (Some(c), Some(f)) if c != f => {
                return Err(CliError::config(
                    "command",
                    format!("config file names {f:?} but the command line runs {c:?}"),
                ))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(CliError::config("command", "no command given".into())),
        };
        Ok(Self {
            command,
            params: file.params.overlay(flags),
            output: OutputSpec {
                path: output.path.or(file.output.path),
                format: output.format.or(file.output.format),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = FileConfig::parse("command = \"ode\"\n[params]\nbogus = 1\n").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("bogus"), "{}", err.message);
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse(
            "command = \"ode\"\n[params]\ngroup = \"SO\"\nn = 5\ntEnd = 12.0\n[output]\nformat = \"json\"\n",
        )
        .unwrap();
        let flags = Params { n: Some(7), ..Default::default() };
        let cfg = RunConfig::merge(Some(file), None, flags, OutputSpec::default()).unwrap();
        assert_eq!(cfg.command, Command::Ode);
        assert_eq!(cfg.params.n, Some(7));
        assert_eq!(cfg.params.t_end, Some(12.0));
        assert_eq!(cfg.format(), Format::Json);
    }

    #[test]
    fn conflicting_commands_are_rejected() {
        let file = FileConfig::parse("command = \"ode\"\n").unwrap();
        let err = RunConfig::merge(Some(file), Some(Command::Verify), Params::default(), OutputSpec::default());
        assert_eq!(err.unwrap_err().code, 2);
    }
}
