use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodge_lattice::algebra::Rat;
use hodge_lattice::cli::{run_document, CliError, Command, OracleMode, Overrides};

#[derive(Parser)]
#[command(name = "hodge-lattice", version, about = "Run a TOML problem document and print a TOML report")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monodromy weight filtrations of commuting nilpotents
    Weightfilt(Flags),
    /// Prolongation frame over a window
    Prolong(Flags),
    /// Local generators of the twisted S-sheaf
    SsheafGens(Flags),
    /// Square-integrability of monomials and sections
    L2Test(Flags),
    /// Norm ratio scan over a Siegel region
    CksScan(Flags),
    /// Curvature sign check by finite differences
    NakanoCheck(Flags),
    /// Log resolution of a plane curve germ
    Resolve(Flags),
    /// Multiplier-type ideal of a Q-divisor germ
    MultIdeal(Flags),
    /// Jumps of the ideal along a coefficient grid
    JumpScan(Flags),
    /// Tameness of a model metric
    TameCheck(Flags),
    /// Run the command named inside the document
    Run(Flags),
}

#[derive(Args)]
struct Flags {
    /// Problem document; standard input when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report destination; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Which verdicts to compute: symbolic, numeric or both
    #[arg(long, value_parser = parse_oracle)]
    oracle: Option<OracleMode>,
    /// Largest total degree listed in monomial tables
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Sample count for randomized scans
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for randomized scans
    #[arg(long)]
    seed: Option<u64>,
    /// A rational such as 1/1000000 or 1e-6
    #[arg(long, value_parser = parse_rat)]
    tolerance: Option<Rat>,
}

fn parse_oracle(s: &str) -> Result<OracleMode, String> {
    s.parse()
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse().map_err(|e: hodge_lattice::algebra::ParseRatError| e.to_string())
}

fn io_error(field: &str, e: io::Error) -> CliError {
    CliError::new("cli", "Io", field, e.to_string())
}

fn run(command: Option<Command>, flags: &Flags) -> Result<String, CliError> {
    let text = match &flags.input {
        Some(path) => fs::read_to_string(path).map_err(|e| io_error("--input", e))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| io_error("stdin", e))?;
            s
        }
    };
    let overrides = Overrides {
        oracle: flags.oracle,
        degree_bound: flags.degree_bound,
        samples: flags.samples,
        seed: flags.seed,
        tolerance: flags.tolerance.clone(),
    };
    run_document(&text, command, &overrides)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Cmd::Weightfilt(f) => (Some(Command::Weightfilt), f),
        Cmd::Prolong(f) => (Some(Command::Prolong), f),
        Cmd::SsheafGens(f) => (Some(Command::SsheafGens), f),
        Cmd::L2Test(f) => (Some(Command::L2Test), f),
        Cmd::CksScan(f) => (Some(Command::CksScan), f),
        Cmd::NakanoCheck(f) => (Some(Command::NakanoCheck), f),
        Cmd::Resolve(f) => (Some(Command::Resolve), f),
        Cmd::MultIdeal(f) => (Some(Command::MultIdeal), f),
        Cmd::JumpScan(f) => (Some(Command::JumpScan), f),
        Cmd::TameCheck(f) => (Some(Command::TameCheck), f),
        Cmd::Run(f) => (None, f),
    };
    let outcome = run(command, flags).and_then(|report| match &flags.output {
        Some(path) => fs::write(path, report).map_err(|e| io_error("--output", e)),
        None => io::stdout().write_all(report.as_bytes()).map_err(|e| io_error("stdout", e)),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", e.to_document());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
