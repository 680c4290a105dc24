//! The placement loop: kings first, then alternating piece draws until a
//! candidate is ready for the solver, then optimization and conventions.

use std::time::Instant;

use rand::Rng;

use crate::chess::{CastlingRights, Color, Piece, PieceKind, Position, Square};
use crate::dsns::DsnsString;
use crate::solver::{find_keys, mate_depth};

use super::{
    check_conventions, enumerate_permutations, optimize_with, Composition, ComposerConfig, Constraints,
    Convention, ExperienceTable, PiecePermutation, Provenance, SurrogateMetrics, COMPOSED_DEPTH,
};

/// The five kinds a draw can produce; a sixth outcome is the blank.
const DRAWS: [PieceKind; 5] = [
    PieceKind::Queen,
    PieceKind::Rook,
    PieceKind::Bishop,
    PieceKind::Knight,
    PieceKind::Pawn,
];

/// Counts attempts against an attempt limit and a deadline.
#[derive(Debug, Clone)]
pub(crate) struct Meter {
    pub attempts: u64,
    pub solver_calls: u64,
    max_attempts: Option<u64>,
    deadline: Option<Instant>,
}

impl Meter {
    pub fn new(max_attempts: Option<u64>, deadline: Option<Instant>) -> Self {
        Meter {
            attempts: 0,
            solver_calls: 0,
            max_attempts,
            deadline,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.max_attempts.is_some_and(|m| self.attempts >= m)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Records one attempt, or returns false if none is left.
    pub fn spend(&mut self) -> bool {
        if self.exhausted() {
            return false;
        }
        self.attempts += 1;
        true
    }
}

pub(crate) enum Outcome {
    Composed(Box<Composition>),
    Failed,
    OutOfBudget,
}

/// What one permutation run is trying to build.
pub(crate) struct Plan<'p> {
    pub supply: [PiecePermutation; 2],
    /// A placement goes to the solver once both counts lie in these ranges,
    /// or when nothing is left to place.
    pub ready: [(u32, u32); 2],
    pub constraints: &'p Constraints,
    pub provenance: &'p Provenance,
}

pub(crate) struct Workshop<'a, R: Rng> {
    pub config: &'a ComposerConfig,
    pub rng: &'a mut R,
    pub meter: &'a mut Meter,
    pub table: Option<&'a ExperienceTable>,
}

impl<R: Rng> Workshop<'_, R> {
    /// Runs every permutation of one string pair, each chosen at random, as
    /// many times as there are permutations. `emit` returns false to stop.
    pub fn run_pair(
        &mut self,
        s1: &DsnsString,
        s2: &DsnsString,
        provenance: &Provenance,
        emit: &mut dyn FnMut(Composition) -> bool,
    ) -> Result<(), super::ComposerError> {
        let constraints = Constraints::from_strings(s1, s2)?;
        let perms = match enumerate_permutations(
            constraints.white_value,
            constraints.black_value,
            constraints.white_count,
            constraints.black_count,
        ) {
            Ok(p) => p,
            Err(_) => {
                self.meter.spend();
                return Ok(());
            }
        };
        for _ in 0..perms.len() {
            let (w, b) = perms.pair(self.rng.gen_range(0..perms.len()));
            let plan = Plan {
                supply: [w, b],
                ready: [constraints.white_count, constraints.black_count],
                constraints: &constraints,
                provenance,
            };
            match self.run(plan) {
                Outcome::Composed(c) => {
                    if !emit(*c) {
                        return Ok(());
                    }
                }
                Outcome::Failed => {}
                Outcome::OutOfBudget => return Ok(()),
            }
            if self.meter.exhausted() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// A random supply for the baselines: up to `max_random_pieces` per side,
    /// kinds uniform, kept within the officer and pawn limits.
    pub fn random_supply(&mut self) -> [PiecePermutation; 2] {
        let mut out = [PiecePermutation::default(); 2];
        for side in &mut out {
            let n = self.rng.gen_range(0..=self.config.max_random_pieces);
            while side.len() < n {
                let kind = DRAWS[self.rng.gen_range(0..DRAWS.len())];
                side.give(kind);
                if !side.is_reasonable() {
                    side.take(kind);
                }
            }
        }
        out
    }

    fn pick_square(&mut self, color: Color, kind: PieceKind, occupied: u64) -> Option<Square> {
        if let Some(t) = self.table {
            return t.sample_square(color, kind, occupied, self.rng);
        }
        let free = !occupied;
        if free == 0 {
            return None;
        }
        let mut k = self.rng.gen_range(0..free.count_ones());
        let mut bits = free;
        loop {
            let sq = bits.trailing_zeros();
            if k == 0 {
                return Some(Square::new(sq as u8));
            }
            k -= 1;
            bits &= bits - 1;
        }
    }

    fn place_kings(&mut self) -> Option<Position> {
        for _ in 0..self.config.placement_cap {
            let w = self.pick_square(Color::White, PieceKind::King, 0)?;
            let b = self.pick_square(Color::Black, PieceKind::King, w.bb())?;
            if let Ok(p) = Position::with_kings(w, b) {
                return Some(p);
            }
        }
        None
    }

    /// Castling rights the placement could support, granted or withheld by
    /// one coin flip per run.
    fn castling(&mut self, pos: Position, coin: &mut Option<bool>) -> Position {
        let home = |color: Color, king: &str, rook: &str| {
            pos.piece_at(king.parse().expect("square")) == Some(Piece::new(color, PieceKind::King))
                && pos.piece_at(rook.parse().expect("square")) == Some(Piece::new(color, PieceKind::Rook))
        };
        let rights = CastlingRights {
            white_king_side: home(Color::White, "e1", "h1"),
            white_queen_side: home(Color::White, "e1", "a1"),
            black_king_side: home(Color::Black, "e8", "h8"),
            black_queen_side: home(Color::Black, "e8", "a8"),
        };
        if !rights.any() {
            return pos;
        }
        let granted = *coin.get_or_insert_with(|| self.rng.gen_bool(0.5));
        if granted {
            pos.with_castling(rights).unwrap_or(pos)
        } else {
            pos.with_castling(CastlingRights::NONE).unwrap_or(pos)
        }
    }

    /// Takes the most recently placed piece still on the board back into
    /// the supply.
    fn undo_last(pos: &mut Position, placed: &mut Vec<Square>, supply: &mut [PiecePermutation; 2]) {
        while let Some(sq) = placed.pop() {
            let Some(piece) = pos.piece_at(sq) else { continue };
            if let Ok(p) = pos.without_piece(sq) {
                *pos = p;
                supply[piece.color.index()].give(piece.kind);
            }
            return;
        }
    }

    /// One run from king placement to a composition or an abort.
    pub fn run(&mut self, plan: Plan) -> Outcome {
        let Plan {
            mut supply,
            ready,
            constraints,
            provenance,
        } = plan;
        let Some(mut pos) = self.place_kings() else {
            return self.abort();
        };
        let mut placed: Vec<Square> = Vec::new();
        let mut turn = Color::White;
        let mut coin = None;
        let mut need_placement = false;

        for _ in 0..self.config.placement_cap {
            let in_range = Color::ALL.iter().all(|&c| {
                let (lo, hi) = ready[c.index()];
                (lo..=hi).contains(&pos.piece_count(c))
            });
            let exhausted = supply.iter().all(|s| s.is_empty());
            if !need_placement && (in_range || exhausted) {
                if !constraints.material_holds(&pos) || !constraints.sparsity_holds(&pos) {
                    return self.abort();
                }
                let candidate = self.castling(pos, &mut coin);
                if !self.meter.spend() {
                    return Outcome::OutOfBudget;
                }
                self.meter.solver_calls += 1;
                if mate_depth(&candidate, self.config.limits) != Ok(Some(COMPOSED_DEPTH)) {
                    Self::undo_last(&mut pos, &mut placed, &mut supply);
                    need_placement = true;
                    continue;
                }
                match self.finish(candidate, constraints, provenance) {
                    Ok(c) => return Outcome::Composed(Box::new(c)),
                    Err(Retry::Abort) => return self.abort(),
                    Err(Retry::AddPieces { optimized, restricts }) => {
                        pos = optimized;
                        placed.retain(|&sq| pos.piece_at(sq).is_some());
                        if restricts {
                            Self::undo_last(&mut pos, &mut placed, &mut supply);
                        }
                        need_placement = true;
                        continue;
                    }
                }
            }

            let side = turn.index();
            if supply[side].is_empty() {
                if exhausted {
                    return self.abort();
                }
                turn = !turn;
                continue;
            }
            let draw = self.rng.gen_range(0..=DRAWS.len());
            let Some(&kind) = DRAWS.get(draw) else {
                turn = !turn;
                continue;
            };
            if supply[side].count(kind) == 0 {
                continue;
            }
            if turn == Color::White
                && !constraints.movers.is_empty()
                && !constraints.movers.contains(&kind)
                && constraints.movers.iter().all(|&m| pos.count(Color::White, m) == 0)
                && self.rng.gen_bool(0.5)
            {
                continue;
            }
            let Some(sq) = self.pick_square(turn, kind, pos.occupied()) else {
                continue;
            };
            if let Ok(next) = pos.with_piece(sq, Piece::new(turn, kind)) {
                pos = next;
                supply[side].take(kind);
                placed.push(sq);
                turn = !turn;
                need_placement = false;
            }
        }
        self.abort()
    }

    fn abort(&mut self) -> Outcome {
        if self.meter.spend() {
            Outcome::Failed
        } else {
            Outcome::OutOfBudget
        }
    }

    /// Optimizes a mate-in-3 placement and checks it against the
    /// conventions and constraints.
    fn finish(
        &mut self,
        candidate: Position,
        constraints: &Constraints,
        provenance: &Provenance,
    ) -> Result<Composition, Retry> {
        let limits = self.config.limits;
        let optimized = optimize_with(&candidate, limits, self.config.passes, |p| constraints.hold(p));
        let report = find_keys(&optimized, limits).map_err(|_| Retry::Abort)?;
        if report.shortest_mate_depth() != Some(COMPOSED_DEPTH) {
            return Err(Retry::Abort);
        }
        let Some(solution) = report.tree.clone() else {
            return Err(Retry::Abort);
        };
        let conventions = check_conventions(
            &optimized,
            &report,
            &self.config.conventions,
            self.config.strict_duals,
        );
        if !conventions.all_hold() || !constraints.hold(&optimized) {
            let restricts = conventions.holds(Convention::NoFlightRestrictingKey) == Some(false);
            return Err(Retry::AddPieces { optimized, restricts });
        }
        Ok(Composition {
            metrics: SurrogateMetrics::of(&optimized, &report),
            position: optimized,
            solution,
            report,
            provenance: provenance.clone(),
            constraints: constraints.clone(),
        })
    }
}

enum Retry {
    Abort,
    AddPieces { optimized: Position, restricts: bool },
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn meter_stops_at_the_limit() {
        let mut m = Meter::new(Some(2), None);
        assert!(m.spend());
        assert!(m.spend());
        assert!(!m.spend());
        assert_eq!(m.attempts, 2);
        let mut past = Meter::new(None, Some(Instant::now()));
        assert!(!past.spend());
    }

    #[test]
    fn random_supplies_are_reasonable() {
        let config = ComposerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut meter = Meter::new(None, None);
        let mut shop = Workshop {
            config: &config,
            rng: &mut rng,
            meter: &mut meter,
            table: None,
        };
        for _ in 0..500 {
            for side in shop.random_supply() {
                assert!(side.is_reasonable());
                assert!(side.len() <= config.max_random_pieces);
            }
        }
    }

    #[test]
    fn uniform_squares_are_empty() {
        let config = ComposerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut meter = Meter::new(None, None);
        let mut shop = Workshop {
            config: &config,
            rng: &mut rng,
            meter: &mut meter,
            table: None,
        };
        let occupied = 0xFFFF_FFFF_FFFF_FF7Eu64;
        for _ in 0..100 {
            let sq = shop.pick_square(Color::White, PieceKind::Rook, occupied).unwrap();
            assert!(sq.index() == 0 || sq.index() == 7);
        }
        assert_eq!(shop.pick_square(Color::White, PieceKind::Rook, u64::MAX), None);
    }
}
