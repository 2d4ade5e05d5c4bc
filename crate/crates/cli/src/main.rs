//! `qpart` — modularity graph partitioning via QUBO and simulated quantum
//! Hamiltonian descent.

mod bench;
mod config;
mod methods;
mod partition;
mod quboout;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::SolverFlags;
use methods::Method;

#[derive(Parser)]
#[command(name = "qpart", version)]
#[command(about = "Graph partitioning by modularity via QUBO + quantum-inspired Hamiltonian descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a graph and write a JSON result.
    Partition(PartitionArgs),
    /// Run methods over a manifest of instances; emit CSV and Markdown.
    Bench(BenchArgs),
    /// Build a QUBO from a graph and write it in COO text plus a JSON sidecar.
    Qubo(QuboArgs),
}

#[derive(clap::Args)]
pub struct PartitionArgs {
    /// Edge-list input file (`u v [w]`, `#`/`%` comments).
    #[arg(long)]
    input: PathBuf,
    /// Number of groups.
    #[arg(long)]
    k: u32,
    /// Partitioning method.
    #[arg(long, value_enum, default_value = "qhd")]
    method: Method,
    /// JSON output path (a one-line summary is printed either way).
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(clap::Args)]
pub struct BenchArgs {
    /// Manifest file: one `path k` pair per line, `#` comments.
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated methods to run per instance.
    #[arg(long, value_delimiter = ',', default_value = "qhd")]
    methods: Vec<Method>,
    /// CSV output path.
    #[arg(long)]
    out_csv: PathBuf,
    /// Optional Markdown summary path.
    #[arg(long)]
    out_md: Option<PathBuf>,
    /// Run up to N instances concurrently (records stay in manifest order).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(clap::Args)]
pub struct QuboArgs {
    /// Edge-list input file.
    #[arg(long)]
    input: PathBuf,
    /// Number of groups.
    #[arg(long)]
    k: u32,
    /// COO output path; the JSON sidecar lands at `<output>.json`.
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    solver: SolverFlags,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Partition(args) => partition::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Qubo(args) => quboout::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
