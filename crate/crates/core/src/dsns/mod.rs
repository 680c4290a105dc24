//! Attribute strings, deviation arithmetic, the cross-domain merge rule and
//! the three-stage search for string pairs matching a target deviation.

mod deviation;
mod sample;
mod search;

pub use deviation::{
    deviation, deviation_at, deviation_unrounded, merge_deviations, merge_digits, round_to,
    summative_division, Deviation, DEFAULT_PRECISION, TERM_PLACES, ZERO_SUBSTITUTE,
};
pub use sample::{DsnsString, Sample};
pub use search::{
    cross_domain_pair, cross_domain_pair_with, merge_chain, random_pair, search_merged,
    search_pair, search_pair_with, Candidate, CrossDomainOutcome, SearchBudget, SearchOutcome,
    Stage, StageBudget,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DsnsError {
    #[error("sample has no strings")]
    EmptySample,
    #[error("strings do not share a schema")]
    SchemaMismatch,
    #[error("attribute {0:?} appears twice")]
    DuplicateAttribute(String),
    #[error("row has {found} values, schema has {expected}")]
    RowWidth { expected: usize, found: usize },
    #[error("no attribute is non-NULL in both strings")]
    NoSurvivingAttributes,
    #[error("every attribute pool is empty")]
    EmptyPool,
    #[error("search budgets and granularity must be positive")]
    InvalidBudget,
}
