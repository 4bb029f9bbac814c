//! `hartree` — command-line front end: exact exponent queries, region
//! diagrams, verification suites, and spectral evolution runs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 numerical abort during an evolution.

mod feasible;
mod landmarks;
mod manifest;
mod rational;
mod region;
mod simulate;
mod verify;

use clap::{Parser, Subcommand};
use hartree_core::Rational;
use std::path::PathBuf;
use std::process::ExitCode;

fn rational_arg(s: &str) -> Result<Rational, String> {
    rational::parse_rational(s)
}

#[derive(Parser)]
#[command(name = "hartree", version, about = "Exact exponent analysis and spectral simulation for an energy-critical nonlocal Schrödinger flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an (alpha, b) sample grid and render the region diagram.
    Region {
        /// Spatial dimension (>= 3).
        #[arg(long)]
        n: u32,
        /// Samples per axis, inclusive of endpoints (>= 16).
        #[arg(long, default_value_t = 64)]
        resolution: u32,
        /// SVG output path.
        #[arg(long, default_value = "region.svg")]
        svg: PathBuf,
        /// CSV output path.
        #[arg(long, default_value = "region.csv")]
        csv: PathBuf,
        /// Manifest path (default: next to the SVG).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Query one exact parameter point (n, alpha, b).
    Feasible {
        /// Spatial dimension (>= 3).
        n: u32,
        /// Exact rational, e.g. 2 or 7/5 (floats are rejected).
        #[arg(value_parser = rational_arg)]
        alpha: Rational,
        /// Exact rational weight exponent.
        #[arg(value_parser = rational_arg)]
        b: Rational,
        /// Solve for an exponent witness and re-check every raw constraint.
        #[arg(long)]
        witness: bool,
        /// Optional manifest path (stdout-only command, so opt-in).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run a verification suite; exits 1 on any failed check.
    Verify {
        /// Which suite to run.
        #[arg(value_enum)]
        suite: verify::Suite,
        /// Sampled points per dimension (exact suites).
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Sampling seed (exact suites).
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Grid points per axis for the numerical suites (power of two >= 32).
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        /// Optional CSV report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest path (written only with --out; default: next to it).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Print the named diagram points with exact coordinates.
    Landmarks {
        /// Spatial dimension (>= 3).
        #[arg(long)]
        n: u32,
        /// Optional CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest path (written only with --out; default: next to it).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run an evolution described by a JSON config file.
    Simulate {
        /// Path to the JSON run configuration.
        config: PathBuf,
        /// Validate the config and write the manifest without evolving.
        #[arg(long)]
        dry_run: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Region { n, resolution, svg, csv, manifest } => {
            region::run(n, resolution, svg, csv, manifest)
        }
        Command::Feasible { n, alpha, b, witness, manifest } => {
            feasible::run(n, alpha, b, witness, manifest)
        }
        Command::Verify { suite, samples, seed, resolution, out, manifest } => {
            verify::run(suite, samples, seed, resolution, out, manifest)
        }
        Command::Landmarks { n, out, manifest } => landmarks::run(n, out, manifest),
        Command::Simulate { config, dry_run } => simulate::run(config, dry_run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
