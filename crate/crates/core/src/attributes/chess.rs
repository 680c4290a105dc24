use std::sync::{Arc, LazyLock};

use super::{schema_of, AttributeError};
use crate::chess::{
    emit_fen, material_difference, parse_san, shannon_value, sparsity, Color, Move, Position,
};
use crate::dsns::DsnsString;

pub const CHESS_SCHEMA: [&str; 10] = [
    "white_pieces",
    "black_pieces",
    "white_value",
    "black_value",
    "value_difference",
    "moves",
    "year",
    "first_piece",
    "last_piece",
    "sparsity",
];

static SCHEMA: LazyLock<Arc<[String]>> = LazyLock::new(|| schema_of(&CHESS_SCHEMA));

pub(crate) fn chess_schema() -> Arc<[String]> {
    SCHEMA.clone()
}

/// A start position and a legal line of play from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChessSequence {
    pub start: Position,
    moves: Vec<Move>,
    pub year: Option<i32>,
}

impl ChessSequence {
    pub fn new(start: Position, moves: Vec<Move>, year: Option<i32>) -> Result<Self, AttributeError> {
        let mut pos = start;
        for (i, m) in moves.iter().enumerate() {
            let legal = pos.find_move(m).ok_or(AttributeError::IllegalSequence(i))?;
            pos = pos.make_move(&legal);
        }
        Ok(ChessSequence { start, moves, year })
    }

    /// Reads a SAN line; move numbers, result marks and `...` are skipped.
    pub fn from_san(start: Position, line: &str, year: Option<i32>) -> Result<Self, AttributeError> {
        let mut pos = start;
        let mut moves = Vec::new();
        for token in line.split_whitespace() {
            let token = strip_move_number(token);
            if token.is_empty() || matches!(token, "1-0" | "0-1" | "1/2-1/2" | "*") {
                continue;
            }
            let m = parse_san(&pos, token).map_err(|source| AttributeError::IllegalMove {
                index: moves.len(),
                source,
            })?;
            pos = pos.make_move(&m);
            moves.push(m);
        }
        Ok(ChessSequence { start, moves, year })
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn final_position(&self) -> Position {
        self.moves.iter().fold(self.start, |p, m| p.make_move(m))
    }
}

/// `12.Nf3` -> `Nf3`, `3...` -> ``; anything else unchanged.
pub(crate) fn strip_move_number(token: &str) -> &str {
    match token.rfind('.') {
        Some(i) if token[..=i].chars().all(|c| c.is_ascii_digit() || c == '.') => &token[i + 1..],
        _ => token,
    }
}

/// The ten chess attributes. The object id is the start position's FEN.
pub fn chess_attributes(seq: &ChessSequence) -> DsnsString {
    let p = &seq.start;
    let mover = p.side_to_move();
    let mut own_moves = 0;
    let mut first = None;
    let mut last = None;
    let mut pos = *p;
    for m in seq.moves() {
        let kind = pos.piece_at(m.from).expect("validated sequence").kind;
        if pos.side_to_move() == mover {
            own_moves += 1;
        }
        first.get_or_insert(kind);
        last = Some(kind);
        pos = pos.make_move(m);
    }
    let values = vec![
        Some(p.piece_count(Color::White) as f64),
        Some(p.piece_count(Color::Black) as f64),
        Some(shannon_value(p, Color::White) as f64),
        Some(shannon_value(p, Color::Black) as f64),
        Some(material_difference(p) as f64),
        Some(own_moves as f64),
        seq.year.map(f64::from),
        first.map(|k| k.code() as f64),
        last.map(|k| k.code() as f64),
        Some(sparsity(p)),
    ];
    DsnsString::new(emit_fen(p), chess_schema(), values).expect("schema width")
}
