//! File formats and bundled fixtures: attribute CSV, PGN, key=value config
//! files, the 90-position regression corpus and a chess attribute sample
//! derived from it.

mod attribute_csv;
mod config;
mod fixture;
mod pgn;

pub use attribute_csv::{read_attribute_csv, write_attribute_csv, write_strings_csv, NULL_TOKEN, ID_COLUMN};
pub use config::{parse_config, Config};
pub use fixture::{chess_sample, load_corpus, CorpusEntry, SourceLabel};
pub use pgn::{movetext_of, read_pgn, write_pgn, write_game, PgnGame, PgnMove};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("attribute file has a header but no rows")]
    EmptyBody,
    #[error("header must start with `{ID_COLUMN}` followed by attribute names")]
    BadHeader,
    #[error("expected attributes {expected:?}, found {found:?}")]
    SchemaMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("row {row}, column `{column}`: `{value}` is neither a number nor {NULL_TOKEN}")]
    NonNumeric { row: usize, column: String, value: String },
    #[error(transparent)]
    Dsns(#[from] crate::dsns::DsnsError),
    #[error("pgn: {0}")]
    Pgn(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("bundled fixture is corrupt: {0}")]
    Fixture(String),
}
