//! Composing mate-in-3 problems from pairs of chess attribute strings, with
//! random and experience-table baselines and a cycle/benchmark driver.
//!
//! One *attempt* is one terminal event of the placement loop: a solver call
//! on a finished placement, an abort (material, sparsity, iteration cap,
//! nothing left to place) or a string pair that admits no permutation.
//! Budgets count attempts or wall-clock time.

mod bench;
mod constraints;
mod conventions;
mod cycle;
mod experience;
mod optimize;
mod permutations;
mod placement;

use std::fmt;
use std::str::FromStr;

pub use bench::{bench_matrix, BenchCell};
pub use constraints::{Constraints, SparsityBand, DENSE_BELOW, SPARSE_ABOVE};
pub use conventions::{check_conventions, parse_conventions, restricts_flights, Convention, ConventionReport};
pub use cycle::{compose_cycle, compose_one, CycleBudget, CycleResult, CycleStats, Sources};
pub use experience::{build_experience_table, ExperienceTable};
pub use optimize::{optimize, optimize_with, DEFAULT_PASSES};
pub use permutations::{
    enumerate_permutations, side_permutations, PiecePermutation, Permutations, MAX_OFFICERS, MAX_PAWNS,
};

use crate::chess::{emit_fen, sparsity, Color, Move, Position};
use crate::dsns::{DsnsError, DsnsString, SearchBudget, DEFAULT_PRECISION};
use crate::solver::{SolutionTree, SolveLimits, SolveReport};

/// Depth every composition must have: mate in exactly three.
pub const COMPOSED_DEPTH: u8 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComposerError {
    #[error("no piece permutation satisfies the constraints")]
    NoPermutations,
    #[error("a permutation may not contain a king")]
    KingInPermutation,
    #[error("more than eight officers or eight pawns")]
    UnreasonablePermutation,
    #[error("strings do not carry the chess attribute schema")]
    NotChessStrings,
    #[error("unknown convention `{0}`")]
    UnknownConvention(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("experience table needs at least one position")]
    EmptyCorpus,
    #[error("strategy {0} needs {1}")]
    MissingSource(StrategyKind, &'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Dsns(#[from] DsnsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    Dsns,
    Random,
    ExperienceTable,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Dsns, StrategyKind::Random, StrategyKind::ExperienceTable];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Dsns => "dsns",
            StrategyKind::Random => "random",
            StrategyKind::ExperienceTable => "experience-table",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = ComposerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ComposerError::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComposerConfig {
    pub strategy: StrategyKind,
    pub conventions: Vec<Convention>,
    /// Count duals at the mating move as well as at White's second move.
    pub strict_duals: bool,
    /// Limits for every solver call made while composing.
    pub limits: SolveLimits,
    /// Draws allowed per permutation before starting over.
    pub placement_cap: u32,
    pub passes: u32,
    pub seed: u64,
    /// Attempt budget of [`compose_one`].
    pub attempts: u64,
    /// Budget of the string-pair search behind the DSNS strategy.
    pub search: SearchBudget,
    pub precision: u8,
    /// Most non-king pieces per side in the random baselines.
    pub max_random_pieces: u8,
}

impl Default for ComposerConfig {
    fn default() -> Self {
        ComposerConfig {
            strategy: StrategyKind::Dsns,
            conventions: Vec::new(),
            strict_duals: false,
            limits: SolveLimits::nodes(2_000_000),
            placement_cap: 1_000,
            passes: DEFAULT_PASSES,
            seed: 0,
            attempts: 10_000,
            search: SearchBudget::iterations(20_000),
            precision: DEFAULT_PRECISION,
            max_random_pieces: 7,
        }
    }
}

impl ComposerConfig {
    pub fn validate(&self) -> Result<(), ComposerError> {
        if self.passes == 0 {
            return Err(ComposerError::InvalidConfig("optimizer passes must be at least 1"));
        }
        if self.placement_cap == 0 {
            return Err(ComposerError::InvalidConfig("placement cap must be at least 1"));
        }
        if self.max_random_pieces > 15 {
            return Err(ComposerError::InvalidConfig("a side has at most 15 pieces besides the king"));
        }
        Ok(())
    }
}

/// Where a composition came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub strategy: StrategyKind,
    /// Sample strings drawn to set the target deviation, foreign ones
    /// included. Empty for the baselines.
    pub source_ids: Vec<String>,
    /// The searched string pair the placement followed (DSNS only).
    pub strings: Option<(DsnsString, DsnsString)>,
    pub seed: u64,
    pub conventions: Vec<Convention>,
    pub strict_duals: bool,
}

/// Stand-ins for an aesthetic score: fewer pieces, more variations and
/// fewer duals are usually preferred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateMetrics {
    /// Pieces on the board, kings included.
    pub pieces: u32,
    pub variations: u32,
    pub duals: (u32, u32),
    pub sparsity: f64,
}

impl SurrogateMetrics {
    pub fn of(pos: &Position, report: &SolveReport) -> Self {
        SurrogateMetrics {
            pieces: pos.piece_count(Color::White) + pos.piece_count(Color::Black),
            variations: report.variations(),
            duals: report.duals(),
            sparsity: sparsity(pos),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Composition {
    pub position: Position,
    pub solution: SolutionTree,
    pub report: SolveReport,
    pub provenance: Provenance,
    /// Limits the position was held to.
    pub constraints: Constraints,
    pub metrics: SurrogateMetrics,
}

impl Composition {
    pub fn fen(&self) -> String {
        emit_fen(&self.position)
    }

    pub fn key(&self) -> Move {
        self.solution.key.mv
    }

    pub fn conventions(&self) -> ConventionReport {
        check_conventions(
            &self.position,
            &self.report,
            &self.provenance.conventions,
            self.provenance.strict_duals,
        )
    }
}
