//! Standard algebraic notation.

use super::position::Position;
use super::types::{Move, PieceKind, Square};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SanError {
    #[error("cannot read move {0:?}")]
    Syntax(String),
    #[error("no legal move matches {0:?}")]
    NoMatch(String),
    #[error("move {0:?} is ambiguous")]
    Ambiguous(String),
}

/// Renders a legal move of `pos` in SAN, including `+`/`#` suffixes.
pub fn to_san(pos: &Position, m: &Move) -> String {
    let mut s = String::new();
    let piece = pos.piece_at(m.from).expect("move origin occupied");
    if m.castle {
        s.push_str(if m.to.file() == 6 { "O-O" } else { "O-O-O" });
    } else if piece.kind == PieceKind::Pawn {
        if m.capture {
            s.push((b'a' + m.from.file()) as char);
            s.push('x');
        }
        s.push_str(&m.to.to_string());
        if let Some(p) = m.promotion {
            s.push('=');
            s.push(p.san_letter().expect("promotion piece"));
        }
    } else {
        s.push(piece.kind.san_letter().expect("non-pawn"));
        let rivals: Vec<Move> = pos
            .legal_moves()
            .into_iter()
            .filter(|o| {
                o.to == m.to
                    && o.from != m.from
                    && pos.piece_at(o.from).map(|p| p.kind) == Some(piece.kind)
            })
            .collect();
        if !rivals.is_empty() {
            let same_file = rivals.iter().any(|o| o.from.file() == m.from.file());
            let same_rank = rivals.iter().any(|o| o.from.rank() == m.from.rank());
            if !same_file {
                s.push((b'a' + m.from.file()) as char);
            } else if !same_rank {
                s.push((b'1' + m.from.rank()) as char);
            } else {
                s.push_str(&m.from.to_string());
            }
        }
        if m.capture {
            s.push('x');
        }
        s.push_str(&m.to.to_string());
    }
    let child = pos.make_move(m);
    if child.in_check() {
        s.push(if child.has_legal_move() { '+' } else { '#' });
    }
    s
}

/// Resolves a SAN token against the legal moves of `pos`.
///
/// The reader is lenient about decoration: check and mate marks,
/// annotation glyphs, doubled capture marks, `0-0` castling and a missing
/// `=` before a promotion letter are all accepted. `S` is read as a knight.
pub fn parse_san(pos: &Position, text: &str) -> Result<Move, SanError> {
    let syntax = || SanError::Syntax(text.to_string());
    let cleaned = text.trim().trim_end_matches(['+', '#', '!', '?']);
    let legal = pos.legal_moves();

    let castle = cleaned.replace('0', "O");
    if castle == "O-O" || castle == "O-O-O" {
        let long = castle == "O-O-O";
        return legal
            .into_iter()
            .find(|m| m.castle && (m.to.file() == 2) == long)
            .ok_or_else(|| SanError::NoMatch(text.to_string()));
    }

    let mut chars: Vec<char> = cleaned
        .chars()
        .filter(|c| !matches!(c, 'x' | ':' | '-'))
        .collect();
    if chars.is_empty() {
        return Err(syntax());
    }

    let mut promotion = None;
    if let Some(&last) = chars.last() {
        if let Some(kind) = PieceKind::from_san_letter(last) {
            if !matches!(kind, PieceKind::King | PieceKind::Pawn) && chars.len() > 2 {
                promotion = Some(kind);
                chars.pop();
                if chars.last() == Some(&'=') {
                    chars.pop();
                }
            }
        }
    }
    chars.retain(|c| *c != '=');

    let kind = match chars.first() {
        Some(c) if c.is_ascii_uppercase() => {
            let k = PieceKind::from_san_letter(*c).ok_or_else(syntax)?;
            chars.remove(0);
            k
        }
        _ => PieceKind::Pawn,
    };
    if chars.len() < 2 {
        return Err(syntax());
    }
    let dest: String = chars[chars.len() - 2..].iter().collect();
    let to: Square = dest.parse().map_err(|_| syntax())?;
    let hint = &chars[..chars.len() - 2];
    let mut from_file = None;
    let mut from_rank = None;
    for c in hint {
        match c {
            'a'..='h' => from_file = Some(*c as u8 - b'a'),
            '1'..='8' => from_rank = Some(*c as u8 - b'1'),
            _ => return Err(syntax()),
        }
    }

    let candidates: Vec<Move> = legal
        .into_iter()
        .filter(|m| {
            m.to == to
                && !m.castle
                && pos.piece_at(m.from).map(|p| p.kind) == Some(kind)
                && m.promotion == promotion
                && from_file.is_none_or(|f| m.from.file() == f)
                && from_rank.is_none_or(|r| m.from.rank() == r)
        })
        .collect();
    match candidates.len() {
        0 => Err(SanError::NoMatch(text.to_string())),
        1 => Ok(candidates[0]),
        _ => Err(SanError::Ambiguous(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::parse_fen;

    #[test]
    fn renders_disambiguation_and_mate() {
        let p = parse_fen("k7/8/1K6/8/8/8/8/1R5R w - - 0 1").unwrap();
        let m = parse_san(&p, "Rhd1").unwrap();
        assert_eq!(to_san(&p, &m), "Rhd1");
        assert!(matches!(parse_san(&p, "Rd1"), Err(SanError::Ambiguous(_))));
        assert!(matches!(parse_san(&p, "Qd1"), Err(SanError::NoMatch(_))));
        let p = parse_fen("k7/2P5/1K6/8/8/8/8/8 w - - 0 1").unwrap();
        let m = parse_san(&p, "c8=Q").unwrap();
        assert_eq!(to_san(&p, &m), "c8=Q#");
    }

    #[test]
    fn lenient_reader() {
        let p = parse_fen("8/4K3/5Nk1/6B1/6r1/8/8/6R1 w - - 0 1").unwrap();
        let m = parse_san(&p, "Rxxg4").unwrap();
        assert_eq!(m.uci(), "g1g4");
        let p = parse_fen("k7/2P5/3K4/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(parse_san(&p, "c8R").unwrap().promotion, Some(PieceKind::Rook));
        assert_eq!(parse_san(&p, "Kc6").unwrap().uci(), "d6c6");
        let p = parse_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1").unwrap();
        assert!(parse_san(&p, "0-0").unwrap().castle);
        assert!(parse_san(&p, "O-O+").unwrap().castle);
    }
}
