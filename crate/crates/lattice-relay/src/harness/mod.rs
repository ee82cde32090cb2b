//! Configuration, seeded execution and result records behind the command-line tool.
//!
//! A [`RunConfig`] is read from JSON, [`run`] dispatches it to
//! [`rate_regions`](crate::rate_regions) or [`relay_schemes`](crate::relay_schemes)
//! and returns a [`RunRecord`], and [`persist`] writes the record (plus a CSV
//! matrix for `format: "csv"`). Payloads depend only on the config: worker
//! count and wall-clock time never enter them.

mod config;

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

pub use config::{load_config, output_dir, Command, Format, RunConfig, Strategy, OUTPUT_DIR_VAR};

use crate::error::{Error, Result};
use crate::rate_regions::{rate_points, region_sweep, write_csv, RatePoint, SweepRow, SweepSpec};
use crate::relay_schemes::{
    simulate_cf, simulate_df_relay, simulate_df_two_relay, simulate_marc, simulate_twrc, CfSetup, ChannelParams,
    DfSetup, MarcSetup, MonteCarlo, SimReport, TwoRelaySetup, TwrcSetup,
};

/// Version stamped into every record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Source of the record timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    #[default]
    System,
    Fixed(DateTime<Utc>),
}

impl Clock {
    fn now(&self) -> DateTime<Utc> {
        match self {
            Clock::System => Utc::now(),
            Clock::Fixed(t) => *t,
        }
    }
}

/// Execution settings that never change results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Size of the worker pool; the global pool when `None`.
    pub workers: Option<usize>,
    pub clock: Clock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Rates { points: Vec<RatePoint> },
    Sweep { rows: Vec<SweepRow> },
    Simulate { reports: Vec<SimReport> },
}

/// How per-trial randomness was derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substreams {
    pub derivation: String,
    pub master: u64,
    /// Trials per report; trial `t` replays alone from `(master, t)`.
    pub trials: u64,
    pub reports: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub substreams: Substreams,
    pub payload: Payload,
}

impl RunRecord {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Serialized payload alone.
    pub fn payload_json(&self) -> Result<String> {
        serde_json::to_string(&self.payload).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Executes `config` and returns its record without touching the filesystem.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunRecord> {
    config.validate()?;
    let started = opts.clock.now();
    let payload = match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(|| execute(config))?,
        None => execute(config)?,
    };
    let finished = opts.clock.now();
    let reports = match &payload {
        Payload::Simulate { reports } => reports.len() as u64,
        _ => 0,
    };
    Ok(RunRecord {
        config: config.clone(),
        version: VERSION.to_string(),
        started: started.to_rfc3339_opts(SecondsFormat::Millis, true),
        finished: finished.to_rfc3339_opts(SecondsFormat::Millis, true),
        substreams: Substreams {
            derivation: crate::relay_schemes::SUBSTREAMS.to_string(),
            master: config.seed,
            trials: if reports > 0 { config.trials as u64 } else { 0 },
            reports,
        },
        payload,
    })
}

fn execute(c: &RunConfig) -> Result<Payload> {
    match c.command {
        Command::Rates => Ok(Payload::Rates {
            points: rate_points(&c.params, c.time_share_points)?,
        }),
        Command::Sweep => Ok(Payload::Sweep {
            rows: region_sweep(&SweepSpec {
                params: c.params,
                ranges: c.ranges.clone(),
                time_share_points: c.time_share_points,
            })?,
        }),
        Command::Simulate => Ok(Payload::Simulate { reports: simulate(c)? }),
    }
}

fn simulate(c: &RunConfig) -> Result<Vec<SimReport>> {
    let mc = MonteCarlo::new(c.blocks, c.trials, c.seed);
    let d = &c.design;
    match (&c.params, c.strategy) {
        (ChannelParams::Relay(p), Strategy::Df) => Ok(vec![simulate_df_relay(p, &DfSetup::design(p, d, c.seed)?, &mc)?]),
        (ChannelParams::Relay(p), Strategy::Cf) => Ok(vec![simulate_cf(p, &CfSetup::design(p, d, c.seed)?, &mc)?]),
        (ChannelParams::TwoRelay(p), _) => {
            Ok(vec![simulate_df_two_relay(p, &TwoRelaySetup::design(p, d, c.seed)?, &mc)?])
        }
        (ChannelParams::Twrc(p), _) => Ok(vec![simulate_twrc(p, &TwrcSetup::design(p, d, c.seed)?, &mc)?]),
        (ChannelParams::Marc(p), _) => {
            let orders = match c.first {
                Some(f) => vec![f - 1],
                None => vec![0, 1],
            };
            orders
                .into_iter()
                .map(|f| simulate_marc(p, &MarcSetup::design(p, f, d, c.seed)?, &mc))
                .collect()
        }
    }
}

/// Files written by [`persist`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub record: PathBuf,
    pub csv: Option<PathBuf>,
}

/// Writes the record as one JSON document and, for CSV output, the rate matrix beside it.
pub fn persist(record: &RunRecord) -> Result<Written> {
    let path = record.config.record_path();
    write_file(&path, record.to_json()?.as_bytes())?;
    let csv = match record.config.csv_path() {
        Some(csv_path) => {
            let rows = match &record.payload {
                Payload::Sweep { rows } => rows.clone(),
                Payload::Rates { points } => points
                    .iter()
                    .map(|p| SweepRow {
                        params: record.config.params,
                        point: p.clone(),
                    })
                    .collect(),
                Payload::Simulate { .. } => return Err(Error::param("format", "simulations are written as JSON only")),
            };
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            write_file(&csv_path, &buf)?;
            Some(csv_path)
        }
        None => None,
    };
    Ok(Written { record: path, csv })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Machine-readable form of an [`Error`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let (kind, field) = match e {
            Error::DimensionMismatch { .. } => ("dimension_mismatch", None),
            Error::InvalidParameter { name, .. } => ("invalid_parameter", Some(name.clone())),
            Error::NonFinite => ("non_finite", None),
            Error::Unsupported(_) => ("unsupported", None),
            Error::NestingViolation { .. } => ("nesting_violation", None),
            Error::EnumerationCap { .. } => ("enumeration_cap", None),
            Error::MessageOutOfRange { .. } => ("message_out_of_range", None),
            Error::InfeasibleDistortion { .. } => ("infeasible_distortion", Some("distortion".to_string())),
            Error::NoCode(_) => ("no_code", None),
            Error::Config(_) => ("config", None),
            Error::Io(_) => ("io", None),
        };
        ErrorRecord {
            kind: kind.to_string(),
            field,
            message: e.to_string(),
        }
    }
}
