//! Precomputed leaper tables and ray-based slider attacks.

use std::sync::LazyLock;

use super::types::{Color, Square};

struct Tables {
    knight: [u64; 64],
    king: [u64; 64],
    pawn: [[u64; 64]; 2],
    /// Rays in the eight directions, indexed N, NE, E, SE, S, SW, W, NW.
    rays: [[u64; 64]; 8],
}

const DIRS: [(i8, i8); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

// Directions whose square indices increase along the ray.
const POSITIVE: [bool; 8] = [true, true, true, false, false, false, false, true];

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let mut t = Tables {
        knight: [0; 64],
        king: [0; 64],
        pawn: [[0; 64]; 2],
        rays: [[0; 64]; 8],
    };
    for sq in Square::all() {
        let i = sq.index();
        for (df, dr) in [
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ] {
            if let Some(to) = sq.offset(df, dr) {
                t.knight[i] |= to.bb();
            }
        }
        for (df, dr) in DIRS {
            if let Some(to) = sq.offset(df, dr) {
                t.king[i] |= to.bb();
            }
        }
        for df in [-1, 1] {
            if let Some(to) = sq.offset(df, 1) {
                t.pawn[Color::White.index()][i] |= to.bb();
            }
            if let Some(to) = sq.offset(df, -1) {
                t.pawn[Color::Black.index()][i] |= to.bb();
            }
        }
        for (d, (df, dr)) in DIRS.iter().enumerate() {
            let mut cur = sq;
            while let Some(next) = cur.offset(*df, *dr) {
                t.rays[d][i] |= next.bb();
                cur = next;
            }
        }
    }
    t
});

#[inline]
pub fn knight(sq: Square) -> u64 {
    TABLES.knight[sq.index()]
}

#[inline]
pub fn king(sq: Square) -> u64 {
    TABLES.king[sq.index()]
}

/// Squares a pawn of `color` on `sq` attacks.
#[inline]
pub fn pawn(color: Color, sq: Square) -> u64 {
    TABLES.pawn[color.index()][sq.index()]
}

#[inline]
fn ray(dir: usize, sq: Square, occupied: u64) -> u64 {
    let t = &*TABLES;
    let mut attacks = t.rays[dir][sq.index()];
    let blockers = attacks & occupied;
    if blockers != 0 {
        let first = if POSITIVE[dir] {
            blockers.trailing_zeros()
        } else {
            63 - blockers.leading_zeros()
        };
        attacks ^= t.rays[dir][first as usize];
    }
    attacks
}

#[inline]
pub fn rook(sq: Square, occupied: u64) -> u64 {
    ray(0, sq, occupied) | ray(2, sq, occupied) | ray(4, sq, occupied) | ray(6, sq, occupied)
}

#[inline]
pub fn bishop(sq: Square, occupied: u64) -> u64 {
    ray(1, sq, occupied) | ray(3, sq, occupied) | ray(5, sq, occupied) | ray(7, sq, occupied)
}

#[inline]
pub fn queen(sq: Square, occupied: u64) -> u64 {
    rook(sq, occupied) | bishop(sq, occupied)
}

/// Iterates the set squares of a bitboard, lowest first.
pub struct Squares(pub u64);

impl Iterator for Squares {
    type Item = Square;

    #[inline]
    fn next(&mut self) -> Option<Square> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as u8;
            self.0 &= self.0 - 1;
            Some(Square::new(i))
        }
    }
}
