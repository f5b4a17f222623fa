//! `derivator`: load shapes and diagrams from JSON documents, run the
//! constructions of both models, check squares and run theorem suites.
//!
//! Exit codes: 0 on success, 1 when a check or suite fails (witnesses are
//! written next to the report), 2 on unusable input.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "derivator", version, about = "Exact computational models of derivators")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Trials for `suite`, random samples for `check`.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Coefficient field: `q` or `fp:P` for a supported prime P.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// Output file, or directory for commands with several outputs.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable output where a table is the default.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SliceArg {
    Over,
    Under,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A named index shape as a poset document, or one of its maps.
    Shape {
        name: String,
        /// Size parameter of the `chain` family.
        #[arg(long)]
        n: Option<usize>,
        /// Emit this attached map instead of the poset.
        #[arg(long)]
        map: Option<String>,
    },
    /// The slice of a monotone map at an element of its target.
    Slice {
        functor: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value_t = SliceArg::Over)]
        side: SliceArg,
    },
    /// The comma poset `u1 / u2` with its projections.
    Comma { u1: PathBuf, u2: PathBuf },
    /// Kan extension of a diagram along a monotone map: strict for vector
    /// space diagrams, homotopy for chain diagrams.
    Kan {
        diagram: PathBuf,
        functor: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Homotopy colimit (or limit) of a chain diagram.
    Hocolim {
        diagram: PathBuf,
        #[arg(long)]
        lim: bool,
    },
    /// The cone of a chain map with its map from the target.
    Cone { map: PathBuf },
    /// Suspension of a complex or a chain map.
    Suspension { input: PathBuf },
    /// The distinguished triangle of a chain map.
    Triangle { map: PathBuf },
    /// The rotated triangle and its sign.
    Rotate { map: PathBuf },
    /// The octahedron of a composable pair.
    Octahedron { f: PathBuf, g: PathBuf },
    /// The biproduct diagram of two complexes.
    Biproduct { x: PathBuf, y: PathBuf },
    /// Sieve and fibration status of a map, or (co)Cartesianness of a
    /// square diagram.
    Status { input: PathBuf },
    /// Mate check of a single square on sample diagrams.
    Check {
        square: PathBuf,
        /// A vector space diagram on the square's top right corner; random
        /// samples are drawn otherwise.
        #[arg(long)]
        sample: Option<PathBuf>,
    },
    /// Run a theorem suite.
    Suite {
        name: String,
        #[arg(long)]
        max_elements: Option<usize>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// A random instance document.
    Gen { kind: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
