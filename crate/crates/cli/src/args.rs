use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_approx::search::{Heuristic, DEFAULT_DIRECT_BOUND, DEFAULT_SEED};
use lattice_approx::DEFAULT_M_FLOOR;

use crate::grid::Grid;
use crate::seeds::parse_seed;

#[derive(Debug, Parser)]
#[command(
    name = "lapprox",
    version,
    about = "Compact lattice approximators: bad-character search, error formulas and experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub seed: SeedArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Master seed; every random choice is derived from it
    #[arg(long, global = true, env = "LAPPROX_SEED", value_parser = parse_seed,
          default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Draw the master seed from the operating system and print it on stderr
    #[arg(long, global = true)]
    pub random_seed: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the code-point offset of every occurrence of a pattern
    Search(SearchArgs),
    /// Evaluate the closed-form error probabilities over a grid
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Measure error rates by Monte-Carlo simulation
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Compare candidate counts of exact and approximate search
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Compare every window
    Brute,
    /// Exact table indexed by code point
    Direct,
    /// Exact hash map
    Assoc,
    /// Compact approximator
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    /// Boyer-Moore bad-character rule
    Bm,
    /// QuickSearch (Sunday) rule
    Qs,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::Bm => Heuristic::BoyerMoore,
            HeuristicArg::Qs => Heuristic::QuickSearch,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Pattern to look for
    #[arg(short, long)]
    pub pattern: String,

    /// UTF-8 text; standard input when absent or `-`
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Engine::Approx)]
    pub engine: Engine,

    #[arg(long, value_enum, default_value_t = HeuristicArg::Bm)]
    pub heuristic: HeuristicArg,

    /// Hash functions of the approximator
    #[arg(short, long, default_value_t = 3)]
    pub d: usize,

    /// Smallest approximator size
    #[arg(long, default_value_t = DEFAULT_M_FLOOR)]
    pub m_floor: usize,

    /// Distinct pattern symbols to size for, instead of estimating
    #[arg(long)]
    pub n: Option<usize>,

    /// Code points the direct engine can index
    #[arg(long, default_value_t = DEFAULT_DIRECT_BOUND)]
    pub direct_bound: u32,

    /// Print the byte offset of each match after its code-point offset
    #[arg(long)]
    pub byte_offsets: bool,

    /// Append a comment line with candidate and comparison counts
    #[arg(long)]
    pub stats: bool,

    /// Write the approximator to this file (approx engine only)
    #[arg(long, value_name = "PATH")]
    pub save_table: Option<PathBuf>,
}

/// Grids accept `7`, `1,2,5` or an inclusive range `1..10`.
#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Bottom-case error: exact and approximate phi, and 2^-d.
    /// Default m is the optimal ceil(n d / ln 2).
    Phi {
        #[arg(long)]
        n: Grid,
        #[arg(long)]
        m: Option<Grid>,
        #[arg(short, long, default_value = "1..10")]
        d: Grid,
    },
    /// Error for n distinct values each taken once. Default m is ceil(2n / ln 2).
    PsiUniform {
        #[arg(long)]
        n: Grid,
        #[arg(long)]
        m: Option<Grid>,
        #[arg(short, long, default_value = "1..10")]
        d: Grid,
    },
    /// Error for the exponential distribution with s levels, n = 2^(s+1) - 1.
    /// Default m is ceil(2n / ln 2).
    PsiExp {
        #[arg(long)]
        s: Grid,
        #[arg(long)]
        m: Option<Grid>,
        #[arg(short, long, default_value = "1..10")]
        d: Grid,
    },
    /// Per-value terms of psi. Default m is ceil(2n / ln 2).
    Summands {
        #[arg(long, value_enum)]
        case: SummandCase,
        /// Support size (uniform case)
        #[arg(long, required_if_eq("case", "uniform"))]
        n: Option<usize>,
        /// Levels (exponential case)
        #[arg(long, required_if_eq("case", "exponential"))]
        s: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(short, long, default_value = "1..10")]
        d: Grid,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummandCase {
    Uniform,
    Exponential,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Rate of non-bottom answers for keys outside the support.
    /// Default m is ceil(n d / ln 2), at least 16.
    Bottom {
        #[arg(long)]
        n: Grid,
        #[arg(long)]
        m: Option<Grid>,
        #[arg(short, long, default_value = "3")]
        d: Grid,
        /// Key universe; default max(100 n, 1000)
        #[arg(long)]
        universe: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Rate of wrong answers for keys in the support. Default m is ceil(2n / ln 2).
    Values {
        #[arg(long, value_enum)]
        dist: DistKind,
        /// Support size (uniform)
        #[arg(long, required_if_eq("dist", "uniform"))]
        n: Option<Grid>,
        /// Levels (geometric): value i taken 2^(s-i) times
        #[arg(long, required_if_eq("dist", "geometric"))]
        s: Option<Grid>,
        #[arg(long)]
        m: Option<Grid>,
        #[arg(short, long, default_value = "3")]
        d: Grid,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Uniform,
    Geometric,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Candidate positions with the approximate oracle over those with the exact one
    Ratio(RatioArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("patterns").required(true).args(["frequent", "rare", "pattern"])))]
pub struct RatioArgs {
    /// UTF-8 corpus
    #[arg(long)]
    pub text: PathBuf,

    /// Patterns built from the corpus's most frequent characters
    #[arg(long, requires = "lengths")]
    pub frequent: bool,

    /// Patterns built from the corpus's least frequent characters
    #[arg(long, requires = "lengths")]
    pub rare: bool,

    /// Explicit pattern; may be repeated
    #[arg(long)]
    pub pattern: Vec<String>,

    /// Pattern lengths for --frequent and --rare
    #[arg(long)]
    pub lengths: Option<Grid>,

    #[arg(short, long, default_value = "1..6")]
    pub d: Grid,

    /// Hash seeds per pattern
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,

    /// Use m = ceil(factor n) instead of ceil(n d / ln 2)
    #[arg(long, value_name = "FACTOR")]
    pub buckets_per_symbol: Option<f64>,

    #[arg(long, value_enum, default_value_t = HeuristicArg::Bm)]
    pub heuristic: HeuristicArg,
}
