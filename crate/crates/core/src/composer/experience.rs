use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::chess::{Color, PieceKind, Position, Square};

use super::ComposerError;

/// Placement frequencies learned from a corpus: for each colour and kind,
/// how often that piece stood on each square, normalized so the squares sum
/// to one. Kinds that never occur keep an all-zero row and are never placed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperienceTable {
    probs: Vec<[f64; 64]>,
    positions: usize,
}

fn slot(color: Color, kind: PieceKind) -> usize {
    color.index() * 6 + kind.index()
}

pub fn build_experience_table(corpus: &[Position]) -> Result<ExperienceTable, ComposerError> {
    if corpus.is_empty() {
        return Err(ComposerError::EmptyCorpus);
    }
    let mut counts = vec![[0u64; 64]; 12];
    for pos in corpus {
        for (sq, piece) in pos.pieces() {
            counts[slot(piece.color, piece.kind)][sq.index()] += 1;
        }
    }
    let probs = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            let mut p = [0.0; 64];
            if total > 0 {
                for (out, &c) in p.iter_mut().zip(row) {
                    *out = c as f64 / total as f64;
                }
            }
            p
        })
        .collect();
    Ok(ExperienceTable {
        probs,
        positions: corpus.len(),
    })
}

impl ExperienceTable {
    pub fn probability(&self, color: Color, kind: PieceKind, sq: Square) -> f64 {
        self.probs[slot(color, kind)][sq.index()]
    }

    /// Number of positions the table was built from.
    pub fn corpus_size(&self) -> usize {
        self.positions
    }

    /// Does the corpus contain this piece at all?
    pub fn knows(&self, color: Color, kind: PieceKind) -> bool {
        self.probs[slot(color, kind)].iter().any(|&p| p > 0.0)
    }

    /// Draws a square for the piece among those not in `occupied`, weighted
    /// by the table. `None` when every square with nonzero weight is taken.
    pub fn sample_square<R: Rng>(
        &self,
        color: Color,
        kind: PieceKind,
        occupied: u64,
        rng: &mut R,
    ) -> Option<Square> {
        let row = &self.probs[slot(color, kind)];
        let weights: Vec<f64> = (0..64)
            .map(|i| if occupied & (1u64 << i) != 0 { 0.0 } else { row[i] })
            .collect();
        let dist = WeightedIndex::new(&weights).ok()?;
        Some(Square::new(dist.sample(rng) as u8))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::parse_fen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sq(s: &str) -> Square {
        s.parse().unwrap()
    }

    #[test]
    fn single_position_is_an_indicator() {
        let p = parse_fen("k7/2P5/3K4/8/8/8/8/8 w - - 0 1").unwrap();
        let t = build_experience_table(&[p]).unwrap();
        assert_eq!(t.probability(Color::White, PieceKind::King, sq("d6")), 1.0);
        assert_eq!(t.probability(Color::White, PieceKind::Pawn, sq("c7")), 1.0);
        assert_eq!(t.probability(Color::White, PieceKind::Pawn, sq("c6")), 0.0);
        assert!(!t.knows(Color::Black, PieceKind::Queen));
    }

    #[test]
    fn frequencies_split() {
        let a = parse_fen("k7/8/8/8/8/8/8/3QK3 w - - 0 1").unwrap();
        let b = parse_fen("k7/8/8/8/8/3Q4/8/4K3 w - - 0 1").unwrap();
        let t = build_experience_table(&[a, b]).unwrap();
        assert_eq!(t.probability(Color::White, PieceKind::Queen, sq("d1")), 0.5);
        assert_eq!(t.probability(Color::White, PieceKind::Queen, sq("d3")), 0.5);
        assert_eq!(t.probability(Color::White, PieceKind::King, sq("e1")), 1.0);
        assert_eq!(build_experience_table(&[]).unwrap_err(), ComposerError::EmptyCorpus);
    }

    #[test]
    fn sampling_avoids_zero_and_occupied_squares() {
        let a = parse_fen("k7/8/8/8/8/8/8/3QK3 w - - 0 1").unwrap();
        let b = parse_fen("k7/8/8/8/8/3Q4/8/4K3 w - - 0 1").unwrap();
        let t = build_experience_table(&[a, b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = t.sample_square(Color::White, PieceKind::Queen, 0, &mut rng).unwrap();
            assert!(s == sq("d1") || s == sq("d3"));
        }
        let s = t.sample_square(Color::White, PieceKind::Queen, sq("d1").bb(), &mut rng);
        assert_eq!(s, Some(sq("d3")));
        assert_eq!(t.sample_square(Color::White, PieceKind::Queen, sq("d1").bb() | sq("d3").bb(), &mut rng), None);
        assert_eq!(t.sample_square(Color::Black, PieceKind::Rook, 0, &mut rng), None);
    }
}
