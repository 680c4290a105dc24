use std::fmt;
use std::str::FromStr;

use crate::attributes::CHESS_SCHEMA;
use crate::chess::{parse_fen, Position};
use crate::dsns::Sample;

use super::{read_attribute_csv, CorpusError};

const CORPUS: &str = include_str!("../../data/corpus.tsv");
const CHESS_SAMPLE: &str = include_str!("../../data/chess_sample.csv");

/// Which composing run produced a corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceLabel {
    /// Single-domain chess run.
    Comp35,
    /// Cross-domain run with a 1,500-composition chess sample and photos.
    Tg1500Photo,
    /// Cross-domain run with a 2,500-composition chess sample and photos.
    Tg2500Photo,
}

impl SourceLabel {
    pub fn label(self) -> &'static str {
        match self {
            SourceLabel::Comp35 => "comp3.5",
            SourceLabel::Tg1500Photo => "tg1500+photo",
            SourceLabel::Tg2500Photo => "tg2500+photo",
        }
    }
}

impl fmt::Display for SourceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SourceLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [SourceLabel::Comp35, SourceLabel::Tg1500Photo, SourceLabel::Tg2500Photo]
            .into_iter()
            .find(|l| l.label() == s)
            .ok_or_else(|| CorpusError::Fixture(format!("unknown source label `{s}`")))
    }
}

/// One of the 90 bundled compositions.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub index: u32,
    /// Well-formed FEN. Equal to `printed_fen` unless the printed one had to
    /// be repaired.
    pub fen: String,
    pub position: Position,
    /// Solver keys in coordinate notation, computed when the fixture was
    /// built.
    pub keys: Vec<String>,
    /// How the printed FEN was repaired, if it was.
    pub repair: Option<String>,
    pub printed_fen: String,
    /// Verbatim, typos included.
    pub printed_solution: String,
    pub source: SourceLabel,
}

/// The bundled 90-position corpus, in index order.
pub fn load_corpus() -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::with_capacity(90);
    for (n, line) in CORPUS.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let [index, fen, keys, repair, printed_fen, printed_solution, source] = cols[..] else {
            return Err(CorpusError::Fixture(format!("line {}: expected 7 columns", n + 1)));
        };
        let index = index
            .parse()
            .map_err(|_| CorpusError::Fixture(format!("line {}: bad index", n + 1)))?;
        let position = parse_fen(fen).map_err(|e| CorpusError::Fixture(format!("#{index}: {e}")))?;
        out.push(CorpusEntry {
            index,
            fen: fen.to_string(),
            position,
            keys: if keys == "-" {
                Vec::new()
            } else {
                keys.split(' ').map(str::to_string).collect()
            },
            repair: (repair != "-").then(|| repair.to_string()),
            printed_fen: printed_fen.to_string(),
            printed_solution: printed_solution.to_string(),
            source: source.parse()?,
        });
    }
    if out.len() != 90 || out.iter().enumerate().any(|(i, e)| e.index as usize != i + 1) {
        return Err(CorpusError::Fixture("expected entries 1 to 90 in order".into()));
    }
    Ok(out)
}

/// Chess attribute strings of the corpus compositions, one per entry, each
/// measured over its solution's main line. Years are unknown and NULL.
pub fn chess_sample() -> Result<Sample, CorpusError> {
    read_attribute_csv(CHESS_SAMPLE.as_bytes(), "chess", Some(&CHESS_SCHEMA))
}
