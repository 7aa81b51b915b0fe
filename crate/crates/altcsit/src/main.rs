//! `altcsit`: outer bounds, vertices, scheme simulation and region
//! comparison for the MISO broadcast channel with alternating CSIT.
//! Every command prints one JSON document on stdout.

mod commands;
mod error;
mod input;
mod output;
mod schedule;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::RegionArgs;

#[derive(Debug, Parser)]
#[command(
    name = "altcsit",
    version,
    about = "DoF outer bounds and schemes for alternating CSIT"
)]
struct Cli {
    /// Also write the command's table (inequalities, vertices, rates) as CSV
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the inequalities of the outer bound
    Bound(BoundArgs),
    /// Maximise a weighted DoF sum over the outer bound
    Maxsum(MaxsumArgs),
    /// Enumerate the vertices of the outer bound and flag Pareto-optimal ones
    Vertices(RegionArgs),
    /// Build a scheme, account for its DoF and check that it decodes
    Simulate(SimulateArgs),
    /// Compare the regions of two CSIT patterns
    Compare(CompareArgs),
    /// Emit plotting data: rate curves of a scheme or vertices of a region
    Plotdata {
        #[command(subcommand)]
        what: PlotData,
    },
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    region: RegionArgs,
    /// Drop inequalities that repeat an earlier one
    #[arg(long)]
    dedup: bool,
    /// Keep only inequalities that cut the region
    #[arg(long)]
    irredundant: bool,
}

#[derive(Debug, Args)]
struct MaxsumArgs {
    #[command(flatten)]
    region: RegionArgs,
    /// Objective weights, one per user (default all ones)
    #[arg(long, value_name = "W1,W2,...")]
    weights: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeName {
    /// Zero forcing with one favored user
    CaseA,
    /// Maddah-Ali and Tse scheme over delayed CSIT
    Mat,
    /// Zero forcing in a share of the slots, MAT over a subset in the rest
    Hybrid,
    /// Three slots with one retransmission, DoF (2/3, 2/3, 1/3)
    #[value(name = "fig5")]
    Retransmission,
    /// Seventeen slots of alternating delayed CSIT, sum DoF 24/17
    #[value(name = "alt24-17")]
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepetitionMode {
    Standard,
    Minimal,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeName,
    /// Number of users (default 3)
    #[arg(long)]
    k: Option<usize>,
    /// Transmit antennas (default K)
    #[arg(long)]
    m: Option<usize>,
    /// Probability of perfect CSIT (case-a, hybrid)
    #[arg(long)]
    lp: Option<String>,
    /// Probability of delayed CSIT (hybrid, default 0)
    #[arg(long)]
    ld: Option<String>,
    /// The user served alone in the single-user slots (case-a)
    #[arg(long, default_value_t = 1)]
    favored: usize,
    /// Users served by the MAT part (hybrid, default all)
    #[arg(long, value_name = "U1,U2,...")]
    subset: Option<String>,
    /// First MAT phase (mat)
    #[arg(long, default_value_t = 1)]
    start: usize,
    /// Repetition counts of the MAT phases
    #[arg(long, value_enum, default_value = "standard")]
    repetitions: RepetitionMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// SNR grid in dB (default 20 to 60 in steps of 5)
    #[arg(long, value_name = "DB1,DB2,...")]
    snr: Option<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Skip the Monte Carlo rank test
    #[arg(long)]
    no_decode: bool,
    /// Fit the high-SNR slope of every user's rate
    #[arg(long)]
    slopes: bool,
    /// Include the full schedule in the output
    #[arg(long)]
    schedule: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// First pattern file (or catalog:NAME)
    first: String,
    /// Second pattern file (or catalog:NAME)
    second: String,
    /// Compare the marginal bounds only, without the pattern inequalities
    #[arg(long)]
    marginal_only: bool,
}

#[derive(Debug, Subcommand)]
enum PlotData {
    /// Mean rate of every user against SNR
    Rates(SchemeArgs),
    /// Vertex coordinates with a Pareto flag
    Vertices(RegionArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match commands::run(&cli, argv) {
        Ok(doc) => {
            for w in &doc.warnings {
                eprintln!("warning: {w}");
            }
            let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            match writeln!(io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
