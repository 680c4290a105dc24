use crate::chess::PieceKind;

use super::ComposerError;

/// Most non-pawn pieces one side may have.
pub const MAX_OFFICERS: u8 = 8;
pub const MAX_PAWNS: u8 = 8;

/// The non-king material of one side, as a multiset over Q, R, B, N, P.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiecePermutation {
    /// Indexed by `PieceKind::index()`; the king slot stays zero.
    counts: [u8; 6],
}

impl PiecePermutation {
    pub fn from_kinds(kinds: &[PieceKind]) -> Result<Self, ComposerError> {
        let mut p = PiecePermutation::default();
        for &k in kinds {
            if k == PieceKind::King {
                return Err(ComposerError::KingInPermutation);
            }
            p.counts[k.index()] += 1;
        }
        if !p.is_reasonable() {
            return Err(ComposerError::UnreasonablePermutation);
        }
        Ok(p)
    }

    pub fn count(&self, kind: PieceKind) -> u8 {
        self.counts[kind.index()]
    }

    pub fn officers(&self) -> u8 {
        self.len() - self.count(PieceKind::Pawn)
    }

    /// Pieces in the multiset, king excluded.
    pub fn len(&self) -> u8 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shannon(&self) -> u32 {
        PieceKind::NON_KING
            .iter()
            .map(|&k| self.count(k) as u32 * k.shannon_weight())
            .sum()
    }

    /// At most eight officers and eight pawns.
    pub fn is_reasonable(&self) -> bool {
        self.officers() <= MAX_OFFICERS && self.count(PieceKind::Pawn) <= MAX_PAWNS
    }

    /// The multiset expanded, strongest pieces first.
    pub fn kinds(&self) -> Vec<PieceKind> {
        PieceKind::NON_KING
            .iter()
            .rev()
            .flat_map(|&k| std::iter::repeat_n(k, self.count(k) as usize))
            .collect()
    }

    pub(crate) fn take(&mut self, kind: PieceKind) -> bool {
        let slot = &mut self.counts[kind.index()];
        if *slot == 0 {
            return false;
        }
        *slot -= 1;
        true
    }

    pub(crate) fn give(&mut self, kind: PieceKind) {
        self.counts[kind.index()] += 1;
    }
}

impl std::fmt::Display for PiecePermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let letters: String = self
            .kinds()
            .iter()
            .map(|k| k.san_letter().unwrap_or('P'))
            .collect();
        write!(f, "{{{letters}}}")
    }
}

/// The valid multisets of each side. Every white entry pairs with every
/// black entry; the number of pairs is how often one string pair is reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutations {
    pub white: Vec<PiecePermutation>,
    pub black: Vec<PiecePermutation>,
}

impl Permutations {
    pub fn len(&self) -> u64 {
        self.white.len() as u64 * self.black.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th pair in white-major order.
    pub fn pair(&self, i: u64) -> (PiecePermutation, PiecePermutation) {
        let b = self.black.len() as u64;
        (self.white[(i / b) as usize], self.black[(i % b) as usize])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (PiecePermutation, PiecePermutation)> + '_ {
        (0..self.len()).map(|i| self.pair(i))
    }
}

/// Every reasonable per-side multiset with the given Shannon value (rounded
/// to the nearest integer; `None` accepts any value) whose size, counting
/// the king, lies in the inclusive range.
pub fn side_permutations(target: Option<f64>, count_range: (u32, u32)) -> Vec<PiecePermutation> {
    let target = target.map(|t| t.round().max(0.0) as u32);
    let (lo, hi) = count_range;
    let mut out = Vec::new();
    for q in 0..=MAX_OFFICERS {
        for r in 0..=MAX_OFFICERS - q {
            for b in 0..=MAX_OFFICERS - q - r {
                for n in 0..=MAX_OFFICERS - q - r - b {
                    for p in 0..=MAX_PAWNS {
                        let mut counts = [0u8; 6];
                        counts[PieceKind::Queen.index()] = q;
                        counts[PieceKind::Rook.index()] = r;
                        counts[PieceKind::Bishop.index()] = b;
                        counts[PieceKind::Knight.index()] = n;
                        counts[PieceKind::Pawn.index()] = p;
                        let perm = PiecePermutation { counts };
                        let size = perm.len() as u32 + 1;
                        if size < lo || size > hi {
                            continue;
                        }
                        if target.is_some_and(|t| perm.shannon() != t) {
                            continue;
                        }
                        out.push(perm);
                    }
                }
            }
        }
    }
    out
}

pub fn enumerate_permutations(
    target_white: Option<f64>,
    target_black: Option<f64>,
    count_range_white: (u32, u32),
    count_range_black: (u32, u32),
) -> Result<Permutations, ComposerError> {
    let perms = Permutations {
        white: side_permutations(target_white, count_range_white),
        black: side_permutations(target_black, count_range_black),
    };
    if perms.is_empty() {
        return Err(ComposerError::NoPermutations);
    }
    Ok(perms)
}
