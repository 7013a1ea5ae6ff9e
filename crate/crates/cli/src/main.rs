//! `permlat`: command-line front end for the permlat library.
//!
//! Exit codes: 0 on success or a passing check, 1 on invalid input or a
//! failed check, 2 on a usage error. With `--json` every report is written
//! to standard output as one JSON document.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "permlat",
    version,
    about = "Lattices, ultrametric spaces, subquotient orders and permutation structures"
)]
pub struct Cli {
    /// Machine-readable JSON report on standard output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum Command {
    /// Finite lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Lattice-valued ultrametric spaces.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Subquotient orders on a space.
    #[command(subcommand)]
    Sq(SqCmd),
    /// Generate a finite approximation of a generic structure.
    Gen(GenArgs),
    /// Extension-property and homogeneity checks on a structure.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Encode a structure as a tuple of linear orders.
    Encode(EncodeArgs),
    /// Recover the definable equivalence relations of a permutation structure.
    Decode(DecodeArgs),
    /// Count labelled k-point patterns of a permutation structure.
    Profile(ProfileArgs),
    /// Sweep the structures presentable with two linear orders.
    Cameron(CameronArgs),
    /// Re-run a recorded command and compare its output byte for byte.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum LatticeCmd {
    /// Check that the file describes a distributive lattice.
    Check { file: PathBuf },
    /// Lower and upper bounds on the number of orders needed.
    Bounds { file: PathBuf },
    /// Enumerate lattices up to isomorphism.
    Enum {
        /// Largest lattice size.
        #[arg(long)]
        max: usize,
        /// Only distributive lattices.
        #[arg(long)]
        distributive: bool,
        /// Print every lattice, not just the counts.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum SpaceCmd {
    /// Validate the ultrametric axioms.
    Check { file: PathBuf },
    /// Canonical amalgam of two extensions of a base space.
    Amalgam {
        base: PathBuf,
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search small amalgamation problems over a lattice for a failure.
    Probe {
        lattice: PathBuf,
        #[arg(long, default_value_t = permlat_core::ultrametric::PROBE_MAX_BASE)]
        max_base: usize,
        #[arg(long, default_value_t = permlat_core::ultrametric::PROBE_MAX_NEW)]
        max_new: usize,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum SqCmd {
    /// Validate every order block of a structure file.
    Check { file: PathBuf },
    /// Lexicographic composition of two orders of a structure.
    Compose {
        file: PathBuf,
        /// Index of the lower order.
        #[arg(long)]
        lo: usize,
        /// Index of the upper order.
        #[arg(long)]
        hi: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a convex order at an intermediate element.
    Split {
        file: PathBuf,
        /// Index of the order to split.
        #[arg(long)]
        order: usize,
        /// Lattice element to split at.
        #[arg(long)]
        at: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub lattice: PathBuf,
    /// Orders as `BOTTOM:TOP` pairs, comma separated.
    #[arg(long)]
    pub orders: String,
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum CheckCmd {
    /// Every one-point type over every k-set is realized.
    Ext(CheckArgs),
    /// Every isomorphism between k-tuples extends by one point.
    Hom(CheckArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EncodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `auto` or a chain-cover file.
    #[arg(long, default_value = "auto")]
    pub cover: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProfileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CameronArgs {
    #[arg(long, default_value_t = 40)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// How a command ended, before mapping to an exit code.
pub enum Outcome {
    Ok,
    /// The input was read but a check on it failed.
    Failed,
}

fn configure_threads() {
    if let Some(n) = std::env::var("PERMLAT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call (as in tests) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    let json = cli.json;
    match commands::run(cli, &argv[1..]) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            if json {
                println!("{}", serde_json::json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
