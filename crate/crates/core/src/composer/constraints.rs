use crate::attributes::CHESS_SCHEMA;
use crate::chess::{material_difference, sparsity, Color, PieceKind, Position};
use crate::dsns::DsnsString;

use super::ComposerError;

const WHITE_PIECES: usize = 0;
const BLACK_PIECES: usize = 1;
const WHITE_VALUE: usize = 2;
const BLACK_VALUE: usize = 3;
const VALUE_DIFFERENCE: usize = 4;
const FIRST_PIECE: usize = 7;
const LAST_PIECE: usize = 8;
const SPARSITY: usize = 9;

pub const DENSE_BELOW: f64 = 0.25;
pub const SPARSE_ABOVE: f64 = 0.75;

/// Which side of the sparsity scale a composition must stay on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SparsityBand {
    /// The two source sparsities sum to 1 or more: reject positions denser
    /// than [`DENSE_BELOW`].
    AtLeast(f64),
    /// The sum is below 1: reject positions sparser than [`SPARSE_ABOVE`].
    AtMost(f64),
    Any,
}

impl SparsityBand {
    pub fn admits(&self, s: f64) -> bool {
        match *self {
            SparsityBand::AtLeast(lo) => s >= lo,
            SparsityBand::AtMost(hi) => s <= hi,
            SparsityBand::Any => true,
        }
    }
}

/// The limits a string pair places on a composition. Every limit whose
/// source attributes are NULL in both strings is left open.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    /// Inclusive piece-count ranges, kings counted.
    pub white_count: (u32, u32),
    pub black_count: (u32, u32),
    /// Averaged Shannon values, before rounding.
    pub white_value: Option<f64>,
    pub black_value: Option<f64>,
    pub material_cap: Option<f64>,
    pub sparsity: SparsityBand,
    /// Kinds of the first and last moving pieces in the sources.
    pub movers: Vec<PieceKind>,
}

impl Constraints {
    /// No limits beyond what any legal position satisfies.
    pub fn open() -> Self {
        Constraints {
            white_count: (1, 16),
            black_count: (1, 16),
            white_value: None,
            black_value: None,
            material_cap: None,
            sparsity: SparsityBand::Any,
            movers: Vec::new(),
        }
    }

    pub fn from_strings(s1: &DsnsString, s2: &DsnsString) -> Result<Self, ComposerError> {
        for s in [s1, s2] {
            if s.schema().len() != CHESS_SCHEMA.len()
                || s.schema().iter().zip(CHESS_SCHEMA).any(|(a, b)| a != b)
            {
                return Err(ComposerError::NotChessStrings);
            }
        }
        let pair = |i: usize| (s1.values()[i], s2.values()[i]);
        let present = |i: usize| -> Vec<f64> {
            let (a, b) = pair(i);
            [a, b].into_iter().flatten().collect()
        };
        let count_range = |i: usize| -> (u32, u32) {
            let v = present(i);
            if v.is_empty() {
                return (1, 16);
            }
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let clamp = |x: f64| (x.round() as i64).clamp(1, 16) as u32;
            (clamp(lo), clamp(hi))
        };
        let average = |i: usize| -> Option<f64> {
            let v = present(i);
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        let material_cap = present(VALUE_DIFFERENCE).into_iter().reduce(f64::max);
        let sparsity = match pair(SPARSITY) {
            (Some(a), Some(b)) if a + b >= 1.0 => SparsityBand::AtLeast(DENSE_BELOW),
            (Some(_), Some(_)) => SparsityBand::AtMost(SPARSE_ABOVE),
            _ => SparsityBand::Any,
        };
        let mut movers = Vec::new();
        for i in [FIRST_PIECE, LAST_PIECE] {
            for v in present(i) {
                let code = v.round().clamp(1.0, 6.0) as u8;
                let kind = PieceKind::from_code(code).expect("code in range");
                if !movers.contains(&kind) {
                    movers.push(kind);
                }
            }
        }
        Ok(Constraints {
            white_count: count_range(WHITE_PIECES),
            black_count: count_range(BLACK_PIECES),
            white_value: average(WHITE_VALUE),
            black_value: average(BLACK_VALUE),
            material_cap,
            sparsity,
            movers,
        })
    }

    pub fn count_range(&self, color: Color) -> (u32, u32) {
        match color {
            Color::White => self.white_count,
            Color::Black => self.black_count,
        }
    }

    pub fn counts_hold(&self, pos: &Position) -> bool {
        Color::ALL.iter().all(|&c| {
            let (lo, hi) = self.count_range(c);
            (lo..=hi).contains(&pos.piece_count(c))
        })
    }

    pub fn material_holds(&self, pos: &Position) -> bool {
        self.material_cap
            .is_none_or(|cap| material_difference(pos) as f64 <= cap + 1e-9)
    }

    pub fn sparsity_holds(&self, pos: &Position) -> bool {
        self.sparsity.admits(sparsity(pos))
    }

    /// Piece counts, material difference and sparsity all within bounds.
    pub fn hold(&self, pos: &Position) -> bool {
        self.counts_hold(pos) && self.material_holds(pos) && self.sparsity_holds(pos)
    }
}
