use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dsns", version, about = "Compose and solve mate-in-3 chess problems", args_override_self = true)]
pub struct Cli {
    /// key=value file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn PGN games, PNM images or WAV files into an attribute CSV.
    Extract(ExtractArgs),
    /// Deviation between two strings of a sample.
    Deviation(DeviationArgs),
    /// Digit-wise merge of two deviations.
    Merge(MergeArgs),
    /// Run one composing cycle and write the compositions as PGN.
    Compose(ComposeArgs),
    /// Solve a position given as FEN, or every position of a PGN file.
    Solve(SolveArgs),
    /// Run the strategy x convention matrix and print a table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Chess,
    Image,
    Audio,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    /// Attribute CSV holding both strings; the bundled chess sample when absent.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    pub first: String,
    pub second: String,
    #[arg(long, default_value_t = 2)]
    pub precision: u8,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// The deviation whose shape the result keeps.
    #[arg(allow_negative_numbers = true)]
    pub target: f64,
    #[arg(allow_negative_numbers = true)]
    pub other: f64,
    #[arg(long, default_value_t = 2)]
    pub precision: u8,
}

#[derive(Debug, Args)]
pub struct ComposerArgs {
    /// dsns, random or experience-table.
    #[arg(long, default_value = "dsns")]
    pub strategy: String,
    /// Chess attribute CSV; the bundled sample when absent.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    /// Comma-separated attribute CSVs from other domains (cross-domain mode).
    #[arg(long)]
    pub foreign: Option<String>,
    /// PGN whose start positions build the experience table; the bundled
    /// corpus when absent.
    #[arg(long)]
    pub table_corpus: Option<PathBuf>,
    /// Comma-separated convention names, or `none`.
    #[arg(long, default_value = "none")]
    pub conventions: String,
    #[arg(long)]
    pub strict_duals: bool,
    #[arg(long, env = "DSNS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, conflicts_with = "budget_seconds")]
    pub budget_attempts: Option<u64>,
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub precision: u8,
    /// Solver node limit per call.
    #[arg(long, default_value_t = 2_000_000)]
    pub nodes: u64,
    #[arg(long, default_value_t = 3)]
    pub passes: u32,
    #[arg(long, default_value_t = 1000)]
    pub placement_cap: u32,
    #[arg(long, default_value_t = 7)]
    pub max_random_pieces: u8,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[command(flatten)]
    pub composer: ComposerArgs,
    /// Output PGN; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// A FEN, or the path of a PGN file.
    pub input: String,
    /// List every key with its mate length.
    #[arg(long)]
    pub all_keys: bool,
    #[arg(long, default_value_t = 10_000_000)]
    pub nodes: u64,
    #[arg(long)]
    pub seconds: Option<f64>,
    /// Conventions to report on; all of them when absent.
    #[arg(long)]
    pub conventions: Option<String>,
    #[arg(long)]
    pub strict_duals: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub composer: ComposerArgs,
    /// Comma-separated strategies.
    #[arg(long, default_value = "dsns,random,experience-table")]
    pub strategies: String,
    /// Convention sets separated by `;`, each a comma-separated list or `none`.
    #[arg(long, default_value = "none")]
    pub convention_sets: String,
    #[arg(long, default_value_t = 1)]
    pub cycles: u32,
    /// One row per cycle as well as the per-cell summary.
    #[arg(long)]
    pub per_cycle: bool,
}
