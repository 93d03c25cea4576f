//! `sigmanet`: compile machines into networks, check them against their
//! machines, run augmented networks and their simulations, and drive the
//! statistical and advice experiments. Every command prints one JSON record
//! on stdout.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error.

mod commands;
mod record;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use record::ExperimentRecord;

#[derive(Parser, Debug)]
#[command(
    name = "sigmanet",
    version,
    about = "Exact saturated-linear network experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    /// Source of all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Step bound for machine runs (network bounds follow from it).
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_steps: u64,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// `exhaustive:<len>`, `random:<count>:<len>` or a word-list file.
    #[arg(long, global = true)]
    pub corpus: Option<String>,
    /// Run networks truncated to this many fractional bits.
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Artifact path of commands that write one.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also append the record to this file.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    /// Include wall time in the record.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile a machine file into a network file plus `<out>.layout`.
    Compile {
        machine: PathBuf,
        /// Hold this advice stream in the bias of cell 0.
        #[arg(long, conflicts_with = "evolving_bias")]
        bias_stream: Option<String>,
        /// Feed this advice stream bit by bit into the bias of cell 0.
        #[arg(long)]
        evolving_bias: Option<String>,
    },
    /// Run a machine and a network side by side on a corpus.
    Verify { machine: PathBuf, network: PathBuf },
    /// Run a network on a corpus.
    Run {
        network: PathBuf,
        /// Fixed decision time of a stochastic network.
        #[arg(long)]
        tau: Option<u64>,
        /// Run the truncated machine simulation with this step bound instead.
        #[arg(long)]
        simulate: Option<String>,
        /// Precision constant of the simulation.
        #[arg(long, default_value_t = 1)]
        c: u32,
    },
    /// Measure the error budgets of the stochastic simulations.
    StochasticSuite {
        snn: PathBuf,
        ptma: PathBuf,
        /// Step bound, e.g. `const:8`.
        #[arg(long)]
        f: String,
        /// Repetitions of the machine-side simulation.
        #[arg(long, default_value_t = 1000)]
        repetitions: u64,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 1)]
        c: u32,
    },
    /// Build a length-n slice outside every slice of a family.
    Diagonalize {
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "fn")]
        f_n: usize,
    },
    /// Interleaving roundtrip and time-bounded decompression check.
    Kolmogorov {
        #[arg(long, default_value = "thue-morse")]
        stream: String,
        #[arg(long, default_value = "log2")]
        g: String,
        /// Compressed stream handed to the decompressor; defaults to `--stream`.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value = "linear:2:0")]
        time: String,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Write one of the built-in stochastic networks.
    ExportDemo {
        name: Demo,
        /// Probability stream of the stochastic line.
        #[arg(long)]
        prob: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Demo {
    Majority3,
    FirstX2,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1, with the record explaining the failure.
    Verification(ExperimentRecord),
}

impl From<sigmanet::Error> for Failure {
    fn from(e: sigmanet::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(rec: &mut ExperimentRecord, opts: &Options, started: Instant) -> Result<(), Failure> {
    if opts.timing {
        rec.wall_ms = Some(started.elapsed().as_millis() as u64);
    }
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{}", rec.line()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = &opts.record {
        rec.append_to(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = commands::dispatch(&cli.command, &cli.opts);
    let outcome = match result {
        Ok(mut rec) => emit(&mut rec, &cli.opts, started).map(|_| 0),
        Err(Failure::Verification(mut rec)) => emit(&mut rec, &cli.opts, started).map(|_| 1),
        Err(e) => Err(e),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(_)) => ExitCode::from(1),
    }
}
