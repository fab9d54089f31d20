//! `dof-lab`: DoF regions, alignment-scheme verification and Monte Carlo
//! rate campaigns for two-user MIMO Z and full interference channels.
//!
//! Exit codes: 0 success, 1 verification or property failure (or internal
//! error), 2 usage or precondition error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dof_lab_core::{AntennaConfig, Channel};

const ENV_THREADS: &str = "DOF_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "dof-lab",
    version,
    about = "DoF regions and blind interference alignment for two-user MIMO interference channels",
    after_help = "Environment:\n  DOF_LAB_THREADS  cap on worker threads for simulate/sweep"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a DoF region (half-planes and vertices, exact rationals).
    Region(RegionArgs),
    /// Build the alignment scheme and verify its three rank/nulling conditions.
    Scheme(SchemeArgs),
    /// Monte Carlo rate sweep with a high-SNR DoF slope estimate.
    Simulate(SimulateArgs),
    /// Check region properties over every configuration up to a size.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct ConfigArgs {
    /// Transmit antennas of user 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    m1: u32,
    /// Receive antennas of user 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    n1: u32,
    /// Transmit antennas of user 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    m2: u32,
    /// Receive antennas of user 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    n2: u32,
}

impl ConfigArgs {
    fn config(&self) -> dof_lab_core::Result<AntennaConfig> {
        AntennaConfig::new(self.m1, self.n1, self.m2, self.n2)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct ToleranceArgs {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, default_value_t = dof_lab_core::matkernel::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Nulling tolerance coefficient c in ‖Ṽ‖_F <= c·(‖H12‖_F + 1).
    #[arg(long, default_value_t = dof_lab_core::biascheme::DEFAULT_NULLING_COEFF)]
    nulling_tol: f64,
}

impl ToleranceArgs {
    fn tolerances(&self) -> dof_lab_core::Tolerances {
        dof_lab_core::Tolerances {
            rank_rel: self.rank_tol,
            nulling_coeff: self.nulling_tol,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ChannelArg {
    Zic,
    Fic,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Zic => Channel::Zic,
            ChannelArg::Fic => Channel::Fic,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Switch {
    #[value(alias = "on")]
    Yes,
    #[value(alias = "off")]
    No,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long, value_enum)]
    channel: ChannelArg,
    /// Channel state information at the transmitters.
    #[arg(long, value_enum)]
    csit: Switch,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Use the deterministic Vandermonde slot channels (default).
    #[arg(long, conflicts_with = "random")]
    special: bool,
    /// Use i.i.d. Gaussian slot channels.
    #[arg(long)]
    random: bool,
    /// Seed for the Gaussian draws (H12 is always drawn).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Directory to write Q, P, U and V as `row,col,re,im` CSV files.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Transmit powers in dB, comma separated (at least two).
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    powers_db: Vec<f64>,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Write the rate CSV here; the DoF estimate still goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PropertyArg {
    All,
    Lemma3,
    CsitDominance,
    ZicDominance,
    Zf,
    Corner,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Largest antenna count per terminal (1..=6).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    max_antennas: u32,
    #[arg(long, value_enum, default_value = "all")]
    property: PropertyArg,
    /// Seed for the zero-forcing beamformer draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `json` prints the summaries as one JSON document; `csv` a table.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn configure_threads() {
    let Some(n) = std::env::var(ENV_THREADS).ok().and_then(|v| v.parse::<usize>().ok()) else {
        return;
    };
    if n > 0 {
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Region(a) => commands::region(&a),
        Command::Scheme(a) => commands::scheme(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
