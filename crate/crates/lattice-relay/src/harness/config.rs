use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rate_regions::ParamRange;
use crate::relay_schemes::{ChannelParams, DesignParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Rates,
    Sweep,
    Simulate,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Sweep => "sweep",
            Command::Simulate => "simulate",
        }
    }
}

/// Relaying strategy of a simulation. Only the single relay channel offers a choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Df,
    Cf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    /// JSON record plus a CSV matrix of rate points.
    Csv,
}

/// One experiment, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Master seed of every random choice.
    pub seed: u64,
    pub params: ChannelParams,
    #[serde(default = "DesignParams::e8")]
    pub design: DesignParams,
    #[serde(default)]
    pub strategy: Strategy,
    /// Which MARC user is decoded first; both orders run when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    /// Swept parameters; the first varies slowest.
    #[serde(default)]
    pub ranges: Vec<ParamRange>,
    #[serde(default = "default_time_share_points")]
    pub time_share_points: usize,
    /// Record path. Defaults to `<command>-<seed>.json` in [`output_dir`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_trials() -> usize {
    200
}

fn default_blocks() -> usize {
    3
}

fn default_time_share_points() -> usize {
    11
}

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "LATTICE_RELAY_OUT_DIR";

/// Directory of records whose config names no output path.
pub fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text).map_err(parse_error)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.design.validate()?;
        if self.trials == 0 {
            return Err(Error::param("trials", "at least one trial is required"));
        }
        if self.blocks < 2 {
            return Err(Error::param("blocks", "block-Markov schemes need at least 2 blocks"));
        }
        if self.time_share_points == 0 {
            return Err(Error::param("time_share_points", "empty range"));
        }
        for r in &self.ranges {
            r.values()?;
            let mut q = self.params;
            q.set(&r.name, r.start)?;
        }
        if self.strategy == Strategy::Cf && !matches!(self.params, ChannelParams::Relay(_)) {
            return Err(Error::param("strategy", "compress-and-forward needs the relay topology"));
        }
        if let Some(f) = self.first {
            if !matches!(self.params, ChannelParams::Marc(_)) {
                return Err(Error::param("first", "only the MARC has a decoding order"));
            }
            if f != 1 && f != 2 {
                return Err(Error::param("first", "must be 1 or 2"));
            }
        }
        if self.format == Format::Csv && self.command == Command::Simulate {
            return Err(Error::param("format", "simulations are written as JSON only"));
        }
        Ok(())
    }

    /// Path of the JSON record.
    pub fn record_path(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| output_dir().join(format!("{}-{}.json", self.command.as_str(), self.seed)))
    }

    /// Path of the CSV matrix, next to the record.
    pub fn csv_path(&self) -> Option<PathBuf> {
        (self.format == Format::Csv).then(|| self.record_path().with_extension("csv"))
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    for prefix in ["unknown field `", "missing field `"] {
        if let Some(name) = msg.strip_prefix(prefix).and_then(|r| r.split('`').next()) {
            return Error::param(name, msg.clone());
        }
    }
    Error::Config(msg)
}

/// Reads and validates a JSON config.
///
/// Syntax errors carry the line and column; validation errors name the field.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RunConfig::from_json(&text)
}
