//! Command-line front end: `sweep`, `verify`, `threshold`, `spectrum`.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error.

pub mod config;
pub mod render;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spectral::diagonalize_model;
use crate::threshold::{find_threshold, ThresholdResult};
use config::{Format, SweepConfig};
use render::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spinring", version, about = "Thermal entanglement and Bell violation on Heisenberg rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file, or `stdout`.
    #[arg(long, global = true, default_value = "stdout")]
    pub out: String,
    /// Seed for random measurement frames; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads, a number or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub threads: Threads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Threads {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Fixed(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thermal quantities, concurrences and Bell measure over a temperature grid.
    Sweep,
    /// Run the invariant suite (default grid unless --config is given).
    Verify,
    /// Threshold temperature of pairwise entanglement.
    Threshold,
    /// Eigenvalues with their total-σz sector.
    Spectrum,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidModel(_)
        | Error::DimensionOverflow { .. }
        | Error::SiteOutOfRange { .. }
        | Error::SiteCollision(_)
        | Error::Precondition(_)
        | Error::NegativeTemperature(_)
        | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_INVARIANT,
    }
}

fn configure_threads(t: Threads) {
    let n = match t {
        Threads::Auto => 0,
        Threads::Fixed(n) => n,
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
        log::debug!("thread pool already set: {e}");
    }
    faer::set_global_parallelism(if n == 1 { faer::Par::Seq } else { faer::Par::rayon(n) });
}

fn load(cli: &Cli) -> Result<SweepConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <path> is required for this command".into()))?;
    let mut cfg = SweepConfig::load(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

pub fn threshold_table(r: &ThresholdResult) -> Table {
    let mut t = Table::new(
        [
            "t_c",
            "bracket_lo",
            "bracket_hi",
            "iterations",
            "u_of_n",
            "status",
            "concurrence_below",
            "concurrence_above",
        ]
        .map(String::from)
        .to_vec(),
    );
    let status = serde_json::to_value(r.status)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    t.rows.push(vec![
        r.t_c.into(),
        r.bracket.0.into(),
        r.bracket.1.into(),
        Cell::Int(r.iterations as i64),
        r.u_of_n.into(),
        Cell::Text(status),
        r.concurrence_below.into(),
        r.concurrence_above.into(),
    ]);
    t
}

pub fn spectrum_table(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let sd = diagonalize_model(&cfg.model)?;
    let mut t = Table::new(["index", "energy", "sector_sz"].map(String::from).to_vec());
    let labels = sd.sector_labels();
    for (k, e) in sd.eigenvalues().iter().enumerate() {
        let label = labels.map_or(Cell::Empty, |l| Cell::Int(l[k] as i64));
        t.rows.push(vec![Cell::Int(k as i64), Cell::Num(*e), label]);
    }
    t.meta
        .insert("ground_degeneracy".into(), Value::from(sd.ground_degeneracy()));
    Ok(t)
}

/// Runs one command and returns `(rendered output, exit code)`.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    match cli.command {
        Command::Sweep => {
            let cfg = load(cli)?;
            let table = sweep::sweep(&cfg)?;
            Ok((table.render(cli.format.unwrap_or(cfg.format)), EXIT_OK))
        }
        Command::Verify => {
            let (cases, format) = match &cli.config {
                Some(_) => {
                    let cfg = load(cli)?;
                    (verify::cases_from_config(&cfg)?, cli.format.unwrap_or(cfg.format))
                }
                None => (verify::default_cases(), cli.format.unwrap_or_default()),
            };
            let report = verify::verify_cases(&cases, None);
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!(
                    "FAIL {}: residual {:e} > {:e} ({})",
                    c.name, c.residual, c.tolerance, c.worst_case
                );
            }
            let code = if report.passed() { EXIT_OK } else { EXIT_INVARIANT };
            Ok((report.to_table().render(format), code))
        }
        Command::Threshold => {
            let cfg = load(cli)?;
            cfg.validate()?;
            let sd = diagonalize_model(&cfg.model)?;
            let r = find_threshold(&cfg.model, &sd)?;
            let out = match cli.format.unwrap_or(cfg.format) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&r).unwrap_or_default();
                    s.push('\n');
                    s
                }
                Format::Csv => threshold_table(&r).to_csv(),
            };
            Ok((out, EXIT_OK))
        }
        Command::Spectrum => {
            let cfg = load(cli)?;
            let t = spectrum_table(&cfg)?;
            Ok((t.render(cli.format.unwrap_or(cfg.format)), EXIT_OK))
        }
    }
}

fn emit(out: &str, text: &str) -> Result<()> {
    if out == "stdout" || out == "-" {
        let mut h = std::io::stdout().lock();
        h.write_all(text.as_bytes())?;
        h.flush()?;
    } else {
        std::fs::write(out, text)?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> i32 {
    configure_threads(cli.threads);
    match execute(&cli).and_then(|(text, code)| emit(&cli.out, &text).map(|_| code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK }
        }
    }
}
