//! Command-line front end: argument parsing and dispatch. The command
//! implementations live in [`commands`] and return plain data.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::ensemble::EntryDistribution;
use crate::error::{Error, Result};
use crate::parallel::with_configured_threads;

pub use commands::{
    cmd_configurations, cmd_exact, cmd_extrapolate, cmd_formulas, cmd_simulate, cmd_validate,
    fit_column, write_simulation, ConfigurationsReport, ExactReport, FilterSpec, FormulaRow,
    MatchingSeries, SimulationOutput,
};
pub use config::{HistogramSettings, LoadedConfig, Outputs, RunConfig, SimCount};
pub use report::{config_echo, ReportDocument};

#[derive(Debug, Parser)]
#[command(
    name = "palintoep",
    version,
    about = "Spectra of highly palindromic Toeplitz ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a run config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Monte Carlo moment table, optional fits and histograms.
    Simulate(SimulateArgs),
    /// Exact expected moment by full enumeration.
    Exact(ExactArgs),
    /// Closed-form limits and bounds.
    Formulas(FormulasArgs),
    /// Fit one moment column of a moment-table CSV in powers of 1/N.
    Extrapolate(ExtrapolateArgs),
    /// Per-matching contributions and sign decomposition.
    Configurations(ConfigurationsArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, conflicts_with_all = ["n", "dims", "sims", "k", "seed", "dist", "order"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "N", value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[arg(long)]
    pub sims: Option<u64>,
    /// Highest moment order (even).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub dist: Option<EntryDistribution>,
    /// Fit order in 1/N for each even moment.
    #[arg(long)]
    pub order: Option<usize>,
    /// Moment table CSV path (overrides the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path (overrides the config).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "N")]
    pub dim: Option<usize>,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub dist: Option<EntryDistribution>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FormulasArgs {
    /// `m` or an inclusive range `a..b`.
    #[arg(long, default_value = "2..5")]
    pub m: String,
    /// `n` or an inclusive range `a..b`.
    #[arg(long, default_value = "0..3")]
    pub n: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    /// Moment-table CSV; defaults to the config's CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub order: Option<usize>,
    /// Weight rows by 1/stderr^2.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigurationsArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "N", value_delimiter = ',')]
    pub dims: Vec<usize>,
    /// Number of pairs; the moment is 2m.
    #[arg(long, conflicts_with = "k")]
    pub m: Option<usize>,
    /// Moment order 2m.
    #[arg(long)]
    pub k: Option<usize>,
    /// `no-cross:C` or `cross:C`.
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl std::str::FromStr for EntryDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntryDistribution::parse(s)
    }
}

/// Parses `a`, `a..b` or `a..=b` as an inclusive range.
pub fn parse_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidArgument(format!("expected a or a..b, got {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    match s.split_once("..") {
        None => {
            let v = num(s)?;
            Ok((v, v))
        }
        Some((a, b)) => Ok((num(a)?, num(b.strip_prefix('=').unwrap_or(b))?)),
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut set = commands::OutputSet::default();
            if let Err(e) = set.write(path, text) {
                set.remove_all();
                return Err(e);
            }
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Option<RunConfig>> {
    path.as_deref()
        .map(|p| LoadedConfig::load(p).map(|c| c.config))
        .transpose()
}

fn missing(flag: &str) -> Error {
    Error::Config(format!("{flag} is required without --config"))
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut loaded = match &args.config {
        Some(path) => LoadedConfig::load(path)?,
        None => {
            let mut config = RunConfig::new(
                args.n.ok_or_else(|| missing("--n"))?,
                args.dims.clone(),
                args.sims.ok_or_else(|| missing("--sims"))?,
                args.k.ok_or_else(|| missing("--k"))?,
            );
            config.seed = args.seed.unwrap_or(0);
            config.distribution = args.dist.unwrap_or_default();
            config.fit_order = args.order;
            LoadedConfig::from_config(config)?
        }
    };
    if let Some(p) = args.out {
        loaded.config.outputs.csv = Some(p);
    }
    if let Some(p) = args.report {
        loaded.config.outputs.report = Some(p);
    }
    let output = cmd_simulate(&loaded)?;
    let outputs = &loaded.config.outputs;
    if outputs.csv.is_none() && outputs.report.is_none() {
        emit(&output.table.to_csv(), None)?;
    }
    write_simulation(&loaded.config, &output)?;
    Ok(())
}

fn exact(args: ExactArgs) -> Result<()> {
    let config = load(&args.config)?;
    let n = args
        .n
        .or(config.as_ref().map(|c| c.n))
        .ok_or_else(|| missing("--n"))?;
    let dim = args
        .dim
        .or(config.as_ref().and_then(|c| c.dims.first().copied()))
        .ok_or_else(|| missing("--N"))?;
    let dist = args
        .dist
        .or(config.as_ref().map(|c| c.distribution))
        .unwrap_or_default();
    emit_json(&cmd_exact(n, dim, args.k, dist)?, args.out.as_deref())
}

fn formulas(args: FormulasArgs) -> Result<()> {
    let rows = cmd_formulas(parse_range(&args.m)?, parse_range(&args.n)?)?;
    emit_json(&rows, args.out.as_deref())
}

fn extrapolate(args: ExtrapolateArgs) -> Result<()> {
    let config = load(&args.config)?;
    let csv = args
        .csv
        .or(config.as_ref().and_then(|c| c.outputs.csv.clone()))
        .ok_or_else(|| missing("--csv"))?;
    let order = args.order.or(config.as_ref().and_then(|c| c.fit_order));
    let weighted = args.weighted || config.as_ref().is_some_and(|c| c.weighted_fit);
    emit_json(
        &cmd_extrapolate(&csv, args.k, order, weighted)?,
        args.out.as_deref(),
    )
}

fn configurations(args: ConfigurationsArgs) -> Result<()> {
    let config = load(&args.config)?;
    let n = args
        .n
        .or(config.as_ref().map(|c| c.n))
        .ok_or_else(|| missing("--n"))?;
    let dims = if args.dims.is_empty() {
        config.map(|c| c.dims).ok_or_else(|| missing("--N"))?
    } else {
        args.dims
    };
    let size = match (args.m, args.k) {
        (Some(m), _) => 2 * m,
        (None, Some(k)) => k,
        (None, None) => return Err(Error::InvalidArgument("--m or --k is required".into())),
    };
    let filter = args.filter.as_deref().map(FilterSpec::parse).transpose()?;
    emit_json(
        &cmd_configurations(n, &dims, size, filter)?,
        args.out.as_deref(),
    )
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Validate { config } => {
            let c = cmd_validate(&config)?;
            println!(
                "ok: n = {}, N = {:?}, max_moment = {}",
                c.n, c.dims, c.max_moment
            );
            Ok(())
        }
        Command::Simulate(a) => simulate(a),
        Command::Exact(a) => exact(a),
        Command::Formulas(a) => formulas(a),
        Command::Extrapolate(a) => extrapolate(a),
        Command::Configurations(a) => configurations(a),
    }
}

/// Parses `args`, runs the command under the configured worker cap and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match with_configured_threads(|| dispatch(cli.command)).and_then(|r| r) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            e.exit_code()
        }
    }
}
