use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lattice_relay::harness::{load_config, persist, run, Command, ErrorRecord, RunConfig, RunOptions};
use lattice_relay::Result;

/// Nested lattice relaying: rate regions and Monte-Carlo simulations.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Achievable rates and cut-set bounds at one parameter point.
    Rates {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rates over a parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Block-Markov Monte-Carlo simulation.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn effective(cmd: Cmd) -> Result<RunConfig> {
    let (mut c, command) = match cmd {
        Cmd::Rates { config, seed } => {
            let mut c = load_config(&config)?;
            if let Some(s) = seed {
                c.seed = s;
            }
            (c, Command::Rates)
        }
        Cmd::Sweep { config } => (load_config(&config)?, Command::Sweep),
        Cmd::Simulate { config, trials, out } => {
            let mut c = load_config(&config)?;
            if let Some(t) = trials {
                c.trials = t;
            }
            if out.is_some() {
                c.output = out;
            }
            (c, Command::Simulate)
        }
    };
    c.command = command;
    c.validate()?;
    Ok(c)
}

#[derive(Serialize)]
struct Failure {
    error: ErrorRecord,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = effective(cli.command).and_then(|c| {
        let record = run(&c, &RunOptions::default())?;
        persist(&record)
    });
    match outcome {
        Ok(w) => {
            println!("{}", w.record.display());
            if let Some(csv) = w.csv {
                println!("{}", csv.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let text = serde_json::to_string(&Failure {
                error: ErrorRecord::from(&e),
            })
            .unwrap_or_else(|_| e.to_string());
            eprintln!("{text}");
            ExitCode::FAILURE
        }
    }
}
