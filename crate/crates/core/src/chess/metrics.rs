//! Position-level measurements used as chess attributes.

use std::collections::BTreeSet;

use super::attacks::{self, Squares};
use super::position::Position;
use super::types::{Color, PieceKind, Square};

/// Shannon material value of one side, kings excluded (Q=9, R=5, B=N=3, P=1).
pub fn shannon_value(pos: &Position, color: Color) -> u32 {
    PieceKind::NON_KING
        .iter()
        .map(|&k| pos.count(color, k) * k.shannon_weight())
        .sum()
}

/// Absolute difference between the two sides' Shannon values.
pub fn material_difference(pos: &Position) -> u32 {
    shannon_value(pos, Color::White).abs_diff(shannon_value(pos, Color::Black))
}

/// `1 / (mean neighbourhood occupancy + 1)` over every piece on the board,
/// kings included, both colours counted. A board with no piece touching
/// another scores 1.0.
pub fn sparsity(pos: &Position) -> f64 {
    sparsity_of_occupancy(pos.occupied())
}

fn sparsity_of_occupancy(occupied: u64) -> f64 {
    let n = occupied.count_ones();
    if n == 0 {
        return 1.0;
    }
    let total: u32 = Squares(occupied)
        .map(|sq| (attacks::king(sq) & occupied).count_ones())
        .sum();
    1.0 / (total as f64 / n as f64 + 1.0)
}

/// Squares the king of `color` could step to if it were that side's turn.
pub fn flight_squares(pos: &Position, color: Color) -> BTreeSet<Square> {
    let mut out = BTreeSet::new();
    let Some(king) = pos.king_square(color) else {
        return out;
    };
    let own = pos.color_bb(color);
    let occ_without_king = pos.occupied() & !king.bb();
    for to in Squares(attacks::king(king) & !own) {
        let mut probe = *pos;
        probe.clear(to);
        if !probe.is_attacked_with(to, !color, occ_without_king) {
            out.insert(to);
        }
    }
    out
}
