//! Batch front-end: parses a run configuration, executes one command and
//! writes a JSON or CSV report.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::groups::{Angle, OperationGroup};
use crate::protocols::ProtocolId;
use crate::rng::SEED_ENV;

mod commands;
mod report;

#[cfg(test)]
mod tests;

pub use report::{Check, Report, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "rsp-forge", version, about = "Exact checks for remote state preparation protocols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Honest executions produce the target state.
    Correctness(Params),
    /// Twirl identities: clifford, haar, gl or design.
    TwirlCheck(Params),
    /// Real-versus-ideal advantage for one protocol.
    Security(Params),
    /// Clifford-state protocol over a p_0 grid.
    Sweep(Params),
    /// Arbitrary-state protocol with its Clifford-state leg inlined.
    Compose(Params),
    /// Remote-operation protocol: honest runs and coalitions.
    Collaborative(Params),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TwirlKind {
    Clifford,
    Haar,
    Gl,
    Design,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct Params {
    /// P1 to P5.
    #[arg(long)]
    pub protocol: Option<ProtocolId>,
    /// Register size; sweep, compose and twirl-check accept a list.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Angle index k for θ = kπ/4.
    #[arg(long)]
    pub theta: Option<u8>,
    /// clifford-1q, z-rotations, xz-rotations or full-unitary-1q.
    #[arg(long)]
    pub group: Option<String>,
    /// Number of clients for the remote-operation protocol.
    #[arg(long)]
    pub clients: Option<usize>,
    /// Comma-separated p_0 values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub p0: Vec<f64>,
    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long, value_enum)]
    pub which: Option<TwirlKind>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Correctness(_) => "correctness",
            Command::TwirlCheck(_) => "twirl-check",
            Command::Security(_) => "security",
            Command::Sweep(_) => "sweep",
            Command::Compose(_) => "compose",
            Command::Collaborative(_) => "collaborative",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Correctness(p)
            | Command::TwirlCheck(p)
            | Command::Security(p)
            | Command::Sweep(p)
            | Command::Compose(p)
            | Command::Collaborative(p) => p,
        }
    }
}

/// Validated configuration; this is what the report echoes.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub protocol: Option<ProtocolId>,
    pub n: Vec<usize>,
    pub theta: Option<u8>,
    pub group: Option<String>,
    pub clients: Option<usize>,
    pub p0: Vec<f64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub format: OutputFormat,
    pub which: Option<TwirlKind>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] crate::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    pub fn from_command(cmd: &Command) -> Result<Self, CliError> {
        let p = cmd.params().clone();
        let cfg = RunConfig {
            command: cmd.name(),
            protocol: p.protocol,
            n: p.n,
            theta: p.theta,
            group: p.group,
            clients: p.clients,
            p0: p.p0,
            samples: p.samples,
            seed: p.seed,
            format: p.format,
            which: p.which,
            out: p.out,
            timing: p.timing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(k) = self.theta {
            Angle::new(k).map_err(|e| usage(e.to_string()))?;
        }
        if let Some(g) = &self.group {
            g.parse::<OperationGroup>().map_err(|e| usage(e.to_string()))?;
        }
        if let Some(bad) = self.p0.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(usage(format!("p0 = {bad} outside [0, 1]")));
        }
        if let Some(bad) = self.n.iter().find(|n| !(2..=5).contains(*n)) {
            return Err(usage(format!("n = {bad} outside 2..=5")));
        }
        if matches!(self.clients, Some(0)) || self.clients.is_some_and(|c| c > 6) {
            return Err(usage("clients must be in 1..=6"));
        }
        if matches!(self.samples, Some(0)) {
            return Err(usage("samples must be positive"));
        }
        let needs_protocol = matches!(self.command, "correctness" | "security");
        if needs_protocol && self.protocol.is_none() {
            return Err(usage(format!("{} needs --protocol", self.command)));
        }
        match self.command {
            "twirl-check" if self.which.is_none() => return Err(usage("twirl-check needs --which")),
            "twirl-check" if self.which == Some(TwirlKind::Gl) && self.n.iter().any(|&n| n > 4) => {
                return Err(usage("enumerated GL(n, 2) twirl needs n <= 4"))
            }
            "sweep" | "compose" if self.protocol.is_some_and(|p| p != ProtocolId::P2) => {
                return Err(usage(format!("{} runs the Clifford-state protocol only", self.command)))
            }
            "collaborative" if self.protocol.is_some_and(|p| p != ProtocolId::P5) => {
                return Err(usage("collaborative runs the remote-operation protocol only"))
            }
            "security" | "collaborative"
                if self.group()?.is_some_and(|g| !g.is_finite())
                    && matches!(self.protocol, Some(ProtocolId::P5) | None) =>
            {
                return Err(usage("exact coalition averaging needs a finite group"))
            }
            _ => {}
        }
        let single_n = !matches!(self.command, "sweep" | "compose" | "twirl-check");
        if single_n && self.n.len() > 1 {
            return Err(usage(format!("{} takes a single --n", self.command)));
        }
        Ok(())
    }

    pub(crate) fn group(&self) -> Result<Option<OperationGroup>, CliError> {
        self.group
            .as_deref()
            .map(|g| g.parse().map_err(|e: crate::Error| usage(e.to_string())))
            .transpose()
    }
}

/// Runs one command and returns its report.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = commands::execute(config)?;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("{}: {elapsed:.3} s", config.command);
    if config.timing {
        report.elapsed_seconds = Some(elapsed);
    }
    Ok(report)
}

fn emit(config: &RunConfig, report: &Report) -> Result<(), CliError> {
    let bytes = match config.format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv()?,
    };
    match &config.out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// Parses `args`, runs and writes the report. Exit status is 0 when every
/// check passes, 1 on a failed check or runtime error and 2 on bad usage.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = RunConfig::from_command(&cli.command).and_then(|cfg| {
        let report = run(&cfg)?;
        emit(&cfg, &report)?;
        Ok(report.pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
