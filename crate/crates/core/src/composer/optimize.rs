use crate::chess::{Color, PieceKind, Position, Square};
use crate::solver::{mate_depth, SolveLimits};

pub const DEFAULT_PASSES: u32 = 3;

/// Removes pieces that the mate does not need.
pub fn optimize(pos: &Position, limits: SolveLimits) -> Position {
    optimize_with(pos, limits, DEFAULT_PASSES, |_| true)
}

/// Sweeps the board a8 to h1, alternating colours starting with White, and
/// drops every non-king piece whose removal keeps the shortest forced mate
/// at the same length. `keep` may veto a removal. The schedule of `passes`
/// sweeps repeats until one full schedule removes nothing, so the result is
/// a fixed point: optimizing it again changes nothing.
///
/// A removal the solver cannot settle within `limits` is not made.
pub fn optimize_with(
    pos: &Position,
    limits: SolveLimits,
    passes: u32,
    keep: impl Fn(&Position) -> bool,
) -> Position {
    let Ok(Some(depth)) = mate_depth(pos, limits) else {
        return *pos;
    };
    let mut current = *pos;
    loop {
        let mut removed = false;
        for pass in 0..passes.max(1) {
            let color = if pass % 2 == 0 { Color::White } else { Color::Black };
            for sq in Square::scan_order() {
                let Some(piece) = current.piece_at(sq) else { continue };
                if piece.color != color || piece.kind == PieceKind::King {
                    continue;
                }
                let Ok(lighter) = current.without_piece(sq) else { continue };
                if !keep(&lighter) {
                    continue;
                }
                if mate_depth(&lighter, limits) == Ok(Some(depth)) {
                    current = lighter;
                    removed = true;
                }
            }
        }
        if !removed {
            return current;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::{parse_fen, Piece};

    #[test]
    fn spare_pawn_is_removed() {
        let base = parse_fen("k7/2P5/3K4/8/8/8/8/8 w - - 0 1").unwrap();
        let extra = base
            .with_piece("h2".parse().unwrap(), Piece::new(Color::White, PieceKind::Pawn))
            .unwrap();
        let limits = SolveLimits::nodes(1_000_000);
        assert_eq!(mate_depth(&extra, limits), Ok(Some(3)));
        assert_eq!(optimize(&extra, limits), base);
        assert_eq!(optimize(&base, limits), base);
    }

    #[test]
    fn veto_keeps_pieces() {
        let extra = parse_fen("k7/2P5/3K4/8/8/8/7P/8 w - - 0 1").unwrap();
        let limits = SolveLimits::nodes(1_000_000);
        let kept = optimize_with(&extra, limits, 3, |p| p.piece_count(Color::White) >= 3);
        assert_eq!(kept, extra);
    }

    #[test]
    fn no_mate_is_left_alone() {
        let p = parse_fen("k7/8/8/8/8/8/8/6NK w - - 0 1").unwrap();
        assert_eq!(optimize(&p, SolveLimits::nodes(100_000)), p);
    }
}
