//! Forsyth-Edwards Notation.
//!
//! Parsing is tolerant of missing trailing fields (castling, en passant and
//! the two counters default to `-`, `-`, `0`, `1`), which is how problem
//! collections usually print positions. Emission always writes all six
//! fields with `-` for empty castling and en-passant fields.

use super::position::{IllegalPosition, Position};
use super::types::{CastlingRights, Color, Piece, Square};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FenError {
    #[error("expected 2 to 6 space-separated fields, found {0}")]
    FieldCount(usize),
    #[error("expected 8 ranks, found {0}")]
    RankCount(usize),
    #[error("rank {rank} describes {width} files")]
    RankWidth { rank: u8, width: usize },
    #[error("invalid piece letter {0:?}")]
    InvalidPiece(char),
    #[error("invalid side to move {0:?}")]
    InvalidSide(String),
    #[error("invalid castling field {0:?}")]
    InvalidCastling(String),
    #[error("invalid en passant field {0:?}")]
    InvalidEnPassant(String),
    #[error("invalid move counter {0:?}")]
    InvalidCounter(String),
    #[error("illegal position: {0}")]
    Illegal(#[from] IllegalPosition),
}

pub fn parse_fen(text: &str) -> Result<Position, FenError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if !(2..=6).contains(&fields.len()) {
        return Err(FenError::FieldCount(fields.len()));
    }

    let side = match fields[1] {
        "w" => Color::White,
        "b" => Color::Black,
        other => return Err(FenError::InvalidSide(other.to_string())),
    };
    let mut pos = Position::empty(side);

    let ranks: Vec<&str> = fields[0].split('/').collect();
    if ranks.len() != 8 {
        return Err(FenError::RankCount(ranks.len()));
    }
    for (i, rank_text) in ranks.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0usize;
        for c in rank_text.chars() {
            if let Some(d) = c.to_digit(10) {
                if d == 0 {
                    return Err(FenError::InvalidPiece(c));
                }
                file += d as usize;
            } else {
                let piece = Piece::from_fen_char(c).ok_or(FenError::InvalidPiece(c))?;
                if file < 8 {
                    pos.put(Square::from_coords(file as u8, rank), piece);
                }
                file += 1;
            }
            if file > 8 {
                return Err(FenError::RankWidth {
                    rank: rank + 1,
                    width: file,
                });
            }
        }
        if file != 8 {
            return Err(FenError::RankWidth {
                rank: rank + 1,
                width: file,
            });
        }
    }

    let castling_text = fields.get(2).copied().unwrap_or("-");
    let mut rights = CastlingRights::NONE;
    if castling_text != "-" {
        for c in castling_text.chars() {
            let slot = match c {
                'K' => &mut rights.white_king_side,
                'Q' => &mut rights.white_queen_side,
                'k' => &mut rights.black_king_side,
                'q' => &mut rights.black_queen_side,
                _ => return Err(FenError::InvalidCastling(castling_text.to_string())),
            };
            if *slot {
                return Err(FenError::InvalidCastling(castling_text.to_string()));
            }
            *slot = true;
        }
    }
    pos.set_castling(rights);

    let ep_text = fields.get(3).copied().unwrap_or("-");
    if ep_text != "-" {
        let sq: Square = ep_text
            .parse()
            .map_err(|_| FenError::InvalidEnPassant(ep_text.to_string()))?;
        pos.set_en_passant(Some(sq));
    }

    let counter = |idx: usize, default: u32| -> Result<u32, FenError> {
        match fields.get(idx) {
            None => Ok(default),
            Some(t) => t.parse().map_err(|_| FenError::InvalidCounter(t.to_string())),
        }
    };
    let halfmove = counter(4, 0)?;
    let fullmove = counter(5, 1)?;
    pos.set_counters(halfmove, fullmove);

    pos.validate()?;
    Ok(pos)
}

/// Just the piece-placement field.
pub fn board_fen(pos: &Position) -> String {
    let mut out = String::with_capacity(64);
    for rank in (0..8u8).rev() {
        let mut empty = 0;
        for file in 0..8u8 {
            match pos.piece_at(Square::from_coords(file, rank)) {
                Some(p) => {
                    if empty > 0 {
                        out.push(char::from(b'0' + empty));
                        empty = 0;
                    }
                    out.push(p.fen_char());
                }
                None => empty += 1,
            }
        }
        if empty > 0 {
            out.push(char::from(b'0' + empty));
        }
        if rank > 0 {
            out.push('/');
        }
    }
    out
}

pub fn emit_fen(pos: &Position) -> String {
    let side = match pos.side_to_move() {
        Color::White => 'w',
        Color::Black => 'b',
    };
    let c = pos.castling();
    let mut castling = String::new();
    if c.white_king_side {
        castling.push('K');
    }
    if c.white_queen_side {
        castling.push('Q');
    }
    if c.black_king_side {
        castling.push('k');
    }
    if c.black_queen_side {
        castling.push('q');
    }
    if castling.is_empty() {
        castling.push('-');
    }
    let ep = pos
        .en_passant()
        .map(|s| s.to_string())
        .unwrap_or_else(|| "-".to_string());
    format!(
        "{} {} {} {} {} {}",
        board_fen(pos),
        side,
        castling,
        ep,
        pos.halfmove_clock(),
        pos.fullmove_number()
    )
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&emit_fen(self))
    }
}

impl std::str::FromStr for Position {
    type Err = FenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fen(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::PieceKind;

    #[test]
    fn table_row_two_piece_counts() {
        let p = parse_fen("5rk1/5qpn/8/3N4/3B4/1B6/1KP3R1/8 w - - 0 1").unwrap();
        assert_eq!(p.piece_count(Color::White), 6);
        assert_eq!(p.piece_count(Color::Black), 5);
    }

    #[test]
    fn round_trip_table_row_one() {
        let f = "8/1p2BN1K/4Qp2/n1R4p/3k2P1/P5n1/4P3/1r6 w - - 0 1";
        assert_eq!(emit_fen(&parse_fen(f).unwrap()), f);
    }

    #[test]
    fn short_fen_is_normalized() {
        let p = parse_fen("2k5/7P/8/8/K7/b7/1p3Q2/8 w").unwrap();
        assert_eq!(emit_fen(&p), "2k5/7P/8/8/K7/b7/1p3Q2/8 w - - 0 1");
    }

    #[test]
    fn malformed_inputs_have_distinct_errors() {
        assert!(matches!(
            parse_fen("9/8/8/8/8/8/8/8 w - - 0 1"),
            Err(FenError::RankWidth { rank: 8, width: 9 })
        ));
        assert!(matches!(
            parse_fen("ppppppppp/8/8/8/8/8/8/8 w - - 0 1"),
            Err(FenError::RankWidth { rank: 8, width: 9 })
        ));
        assert!(matches!(
            parse_fen("7/8/8/8/8/8/8/8 w - - 0 1"),
            Err(FenError::RankWidth { rank: 8, width: 7 })
        ));
        assert!(matches!(parse_fen("8/8/8"), Err(FenError::FieldCount(1))));
        assert!(matches!(
            parse_fen("4k3/8/8/8/8/8/4K3 w - - 0 1"),
            Err(FenError::RankCount(7))
        ));
        assert!(matches!(
            parse_fen("4k3/8/8/8/8/8/8/4X3 w - - 0 1"),
            Err(FenError::InvalidPiece('X'))
        ));
        assert!(matches!(
            parse_fen("8/8/8/8/8/8/8/4K3 w - - 0 1"),
            Err(FenError::Illegal(IllegalPosition::KingCount { .. }))
        ));
        assert!(matches!(
            parse_fen("4k3/8/8/8/8/8/8/4K2P w - - 0 1"),
            Err(FenError::Illegal(IllegalPosition::PawnOnBackRank(_)))
        ));
        assert!(matches!(
            parse_fen("4k3/4R3/8/8/8/8/8/4K3 w - - 0 1"),
            Err(FenError::Illegal(IllegalPosition::OpponentInCheck))
        ));
        assert!(matches!(
            parse_fen("8/8/8/8/8/8/3kK3/8 w - - 0 1"),
            Err(FenError::Illegal(IllegalPosition::KingsAdjacent))
        ));
    }

    #[test]
    fn rank_width_overflow_is_rejected() {
        assert!(matches!(
            parse_fen("44k/8/8/8/8/8/8/4K3 w - - 0 1"),
            Err(FenError::RankWidth { .. })
        ));
    }

    #[test]
    fn en_passant_changes_fen() {
        let a = parse_fen("4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 2").unwrap();
        let b = parse_fen("4k3/8/8/3pP3/8/8/8/4K3 w - - 0 2").unwrap();
        assert_ne!(emit_fen(&a), emit_fen(&b));
        assert!(parse_fen("4k3/8/8/3pP3/8/8/8/4K3 w - e6 0 2").is_err());
    }

    #[test]
    fn castling_requires_home_squares() {
        assert!(parse_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1").is_ok());
        assert!(matches!(
            parse_fen("4k3/8/8/8/8/8/8/4K1R1 w K - 0 1"),
            Err(FenError::Illegal(IllegalPosition::InvalidCastling))
        ));
    }

    #[test]
    fn counts_include_kings() {
        let p = Position::initial();
        assert_eq!(p.piece_count(Color::White), 16);
        assert_eq!(p.count(Color::Black, PieceKind::Pawn), 8);
    }
}
