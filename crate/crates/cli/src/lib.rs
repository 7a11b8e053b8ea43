//! Command line front end: parses a command, runs it against the library and
//! writes a CSV or JSON report.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lbsparse::ratio::parse_rational;
use lbsparse::Rational;
use serde::{Serialize, Serializer};

mod commands;
pub mod report;

use report::{Format, Report};

/// Environment variable overriding the labeled-edge budget of `construct-mc`.
pub const BUDGET_ENV: &str = "LBSPARSE_MC_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] lbsparse::Error),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("cannot write report: {0}")]
    Output(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: library errors keep their own codes.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io { .. } => 20,
            CliError::Output(_) => 21,
            CliError::Usage(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lbsparse",
    version,
    about = "Load-balancing sparsifiers and Matching-Contractors at desk scale"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn rational(s: &str) -> Result<Rational, lbsparse::Error> {
    parse_rational(s)
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal maximum load of a client set.
    Optload(OptloadArgs),
    /// Check a subgraph against the sparsifier definitions.
    VerifySparsifier(VerifySparsifierArgs),
    /// Check a matching decomposition as a Matching-Contractor.
    VerifyMc(VerifyMcArgs),
    /// Build the string-based Matching-Contractor from a set family.
    ConstructMc(ConstructMcArgs),
    /// Sample a set family with bounded pairwise intersections.
    GenFamily(GenFamilyArgs),
    /// Solve the primal and dual sparsification LPs exactly.
    LpSolve(LpSolveArgs),
    /// Round the primal LP into a sparsifier.
    RoundPrimal(RoundPrimalArgs),
    /// Round the dual LP into a Matching-Contractor.
    RoundDual(RoundDualArgs),
    /// Thin each matching of a contractor and expose the broken client set.
    Brittleness(BrittlenessArgs),
    /// Sample hard instances from a base contractor and check recovery.
    HardDist(HardDistArgs),
    /// Simulate the one-way sparsifier protocol on random edge partitions.
    Protocol(ProtocolArgs),
    /// Convert a contractor into equal-sized induced matchings.
    RsConvert(RsConvertArgs),
    /// Cap client degrees and drop unused servers.
    ReduceServers(ReduceServersArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Optload(_) => "optload",
            Command::VerifySparsifier(_) => "verify-sparsifier",
            Command::VerifyMc(_) => "verify-mc",
            Command::ConstructMc(_) => "construct-mc",
            Command::GenFamily(_) => "gen-family",
            Command::LpSolve(_) => "lp-solve",
            Command::RoundPrimal(_) => "round-primal",
            Command::RoundDual(_) => "round-dual",
            Command::Brittleness(_) => "brittleness",
            Command::HardDist(_) => "hard-dist",
            Command::Protocol(_) => "protocol",
            Command::RsConvert(_) => "rs-convert",
            Command::ReduceServers(_) => "reduce-servers",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct OptloadArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated clients; all clients when omitted.
    #[arg(long)]
    pub clients: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lens {
    Def,
    Operational,
    Expansion,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifySparsifierArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub sparsifier: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long, value_enum, default_value_t = Lens::All)]
    pub lens: Lens,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyMcArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructMcArgs {
    #[arg(long)]
    pub w: usize,
    #[arg(long)]
    pub k: usize,
    /// Sets over `1..=2k` written as `1,2;3,4`. Generated when omitted.
    #[arg(long)]
    pub family: Option<String>,
    /// Intersection parameter for a generated family.
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_opt_rational")]
    pub delta: Option<Rational>,
    /// Size of a generated family.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub max_attempts: usize,
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Resample,
    Greedy,
}

#[derive(Debug, Args, Serialize)]
pub struct GenFamilyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_attempts: usize,
    #[arg(long, value_enum, default_value_t = Mode::Resample)]
    pub mode: Mode,
}

#[derive(Debug, Args, Serialize)]
pub struct LpSolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
}

#[derive(Debug, Args, Serialize)]
pub struct RoundPrimalArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Write the first trial's subgraph here.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RoundDualArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Write the first trial's decomposition here.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BrittlenessArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    /// Only this matching; every matching when omitted.
    #[arg(long)]
    pub index: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct HardDistArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Keep only the most edge-heavy size class of matchings first.
    #[arg(long)]
    pub group: bool,
    /// Enumerate every assignment with load at most alpha (at most 10 clients).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Identity,
    Greedy,
    Sample,
}

#[derive(Debug, Args, Serialize)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Probability that an edge goes to Alice.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = Strategy::Greedy)]
    pub strategy: Strategy,
    /// Keep probability for the sampling strategy.
    #[arg(long, default_value_t = 0.5)]
    pub sample_p: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RsConvertArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceServersArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

/// Digests of the files a command reads, for the config hash.
#[derive(Default)]
pub(crate) struct Inputs {
    digests: Vec<String>,
}

impl Inputs {
    pub(crate) fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        self.digests.push(report::digest(text.as_bytes()));
        Ok(text)
    }

    pub(crate) fn digests(&self) -> &[String] {
        &self.digests
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `--out` or to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return write!(stdout, "{e}").map_err(|e| CliError::Output(e.to_string()));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let name = cli.command.name();
    let (report, failure) = commands::dispatch(name, &cli.command)?;
    match &cli.out {
        Some(path) => {
            let mut buf = Vec::new();
            report.write(cli.format, &mut buf)?;
            write_file(path, &String::from_utf8(buf).expect("reports are UTF-8"))?;
        }
        None => report.write(cli.format, stdout)?,
    }
    failure.map_or(Ok(()), |e| Err(e.into()))
}

pub(crate) fn new_report(
    name: &str,
    seed: Option<u64>,
    params: &impl Serialize,
    inputs: &Inputs,
) -> Report {
    Report::new(name, seed, params, inputs.digests())
}
