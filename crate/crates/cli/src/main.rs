//! `selftile`: reports (JSON) and figures (SVG) for self-similar tilings with
//! a complex Perron expansion.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "selftile", version, about = "Self-similar tilings with complex Perron expansion")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Absolute tolerance for numeric identities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iteration cap for root finding and power iteration.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Recorded in every report. No command currently draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix: writes PREFIX.json and SVG figures next to it.
    /// Without it the JSON report goes to stdout and no figures are written.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a polynomial and print its roots.
    PerronCheck {
        /// Integer coefficients, lowest degree first, e.g. 1,2,-1,1.
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Tiles from a free group endomorphism.
    TileEndo {
        /// Standard endomorphism parameters n,p,q,r.
        #[arg(long, conflicts_with = "endo", required_unless_present = "endo", allow_hyphen_values = true)]
        pqr: Option<String>,
        /// JSON file mapping generators to words, e.g. {"a": "b", "b": "c", "c": "ca^-1b^-2"}.
        #[arg(long)]
        endo: Option<PathBuf>,
        /// Approximation level.
        #[arg(short, long, default_value_t = 6)]
        k: u32,
    },
    /// Seed polygon, annulus and constants of the lattice construction,
    /// then growth for a number of generations.
    Lattice {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(short, long, default_value_t = 3)]
        generations: u32,
        /// Make the seed polygon invariant under rotation by 2π/m.
        #[arg(long)]
        symmetric: Option<u64>,
        /// Also subdivide one surrounding with a central tile and check
        /// overlap agreement with a neighbour.
        #[arg(long)]
        check_subdivision: bool,
    },
    /// Growth with explicit controls.
    Grow {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(short, long)]
        generations: u32,
        /// Replace the computed n (subdivision uses n + 2).
        #[arg(long)]
        n: Option<u32>,
        /// Subdivide without inserting central tiles.
        #[arg(long)]
        no_central: bool,
        /// Stop once the patch has more triangles than this.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    /// Refined boundary of an annulus triangle.
    RefineBoundary {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Index of the annulus triangle.
        #[arg(long, default_value_t = 0)]
        triangle: usize,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        /// Replace the computed n.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Is e^{2πi/m} in ℚ(λ)?
    Zeta {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        m: u64,
        /// Exit with status 1 when the root of unity is absent.
        #[arg(long)]
        require: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        selftile::par::set_threads(cli.global.jobs);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("selftile: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub(crate) type Result<T> = std::result::Result<T, CliError>;
