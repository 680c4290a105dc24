//! Exhaustive mate-in-n search for White-to-move positions, up to three
//! White moves.
//!
//! The search is a plain AND/OR tree walk. White nodes succeed on the first
//! move that forces mate; Black nodes fail on the first reply that escapes.
//! A transposition table keyed on the position (counters excluded) stores
//! proven mate and no-mate bounds, which is sound because both are monotone
//! in the remaining depth.

mod tree;

use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use crate::chess::{Color, Move, Position, Square};

pub use tree::{Continuation, Defense, SolutionTree};

/// Maximum number of White moves the solver will look at.
pub const MAX_DEPTH: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    max_time: Option<Duration>,
    max_nodes: Option<u64>,
}

impl SolveLimits {
    pub fn new(max_time: Option<Duration>, max_nodes: Option<u64>) -> Result<Self, SolveError> {
        if max_time.is_none() && max_nodes.is_none() {
            return Err(SolveError::NoLimit);
        }
        Ok(SolveLimits { max_time, max_nodes })
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SolveLimits {
            max_time: None,
            max_nodes: Some(max_nodes),
        }
    }

    pub fn time(max_time: Duration) -> Self {
        SolveLimits {
            max_time: Some(max_time),
            max_nodes: None,
        }
    }

    /// Effectively unbounded; used where completeness matters more than time.
    pub fn exhaustive() -> Self {
        Self::nodes(u64::MAX)
    }

    pub fn max_time(&self) -> Option<Duration> {
        self.max_time
    }

    pub fn max_nodes(&self) -> Option<u64> {
        self.max_nodes
    }
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self::nodes(10_000_000)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("solve limits need a time or node budget")]
    NoLimit,
    #[error("the solver only handles White-to-move positions")]
    BlackToMove,
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
}

/// Every White first move that forces mate within three moves, plus the
/// solution tree of the preferred one.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Ordered by forced mate length, then by move generation order.
    pub keys: Vec<Move>,
    /// Forced mate length of each entry in `keys`.
    pub key_depths: Vec<u8>,
    /// Tree for `keys[0]`.
    pub tree: Option<SolutionTree>,
    pub nodes: u64,
}

impl SolveReport {
    pub fn is_cooked(&self) -> bool {
        self.keys.len() > 1
    }

    pub fn shortest_mate_depth(&self) -> Option<u8> {
        self.key_depths.first().copied()
    }

    pub fn variations(&self) -> u32 {
        self.tree.as_ref().map_or(0, count_variations)
    }

    /// Dual counts at White's second and third move.
    pub fn duals(&self) -> (u32, u32) {
        self.tree.as_ref().map_or((0, 0), detect_duals)
    }
}

/// Shortest forced mate of at most three White moves, with its tree.
pub fn solve_mate3(pos: &Position, limits: SolveLimits) -> Result<Option<SolutionTree>, SolveError> {
    check_side(pos)?;
    let mut s = Search::new(limits);
    let Some(depth) = s.mate_depth(pos)? else {
        return Ok(None);
    };
    for (m, child) in s.white_children(pos, depth)? {
        if s.black_loses(&child, depth)? {
            let key = s.build(m, &child, depth)?;
            return Ok(Some(SolutionTree { start: *pos, key }));
        }
    }
    unreachable!("a move achieving the proven mate depth exists")
}

/// All keys of a mate in at most three.
pub fn find_keys(pos: &Position, limits: SolveLimits) -> Result<SolveReport, SolveError> {
    check_side(pos)?;
    let mut s = Search::new(limits);
    let children = pos.legal_children();
    s.tick(children.len() as u64)?;
    let mut found: Vec<(u8, usize, Move, Position)> = Vec::new();
    for (i, (m, child)) in children.into_iter().enumerate() {
        if let Some(d) = s.key_depth(&child, MAX_DEPTH)? {
            found.push((d, i, m, child));
        }
    }
    found.sort_by_key(|&(d, i, ..)| (d, i));
    let tree = match found.first() {
        Some(&(d, _, m, child)) => Some(SolutionTree {
            start: *pos,
            key: s.build(m, &child, d)?,
        }),
        None => None,
    };
    Ok(SolveReport {
        keys: found.iter().map(|f| f.2).collect(),
        key_depths: found.iter().map(|f| f.0).collect(),
        tree,
        nodes: s.nodes,
    })
}

/// Length of the shortest forced mate of at most three moves, without
/// building a tree. Cheaper than [`find_keys`] when only the depth matters.
pub fn mate_depth(pos: &Position, limits: SolveLimits) -> Result<Option<u8>, SolveError> {
    check_side(pos)?;
    Search::new(limits).mate_depth(pos)
}

pub fn count_variations(tree: &SolutionTree) -> u32 {
    tree.variations()
}

pub fn detect_duals(tree: &SolutionTree) -> (u32, u32) {
    tree.duals()
}

fn check_side(pos: &Position) -> Result<(), SolveError> {
    if pos.side_to_move() == Color::Black {
        return Err(SolveError::BlackToMove);
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Bounds {
    /// Smallest depth proven to force mate, `u8::MAX` if none.
    mate_within: u8,
    /// Largest depth proven not to force mate, 0 if none.
    no_mate_within: u8,
}

struct Search {
    limits: SolveLimits,
    started: Instant,
    nodes: u64,
    next_clock_check: u64,
    table: FxHashMap<[u64; 8], Bounds>,
    killers: [Option<(Square, Square)>; MAX_DEPTH as usize + 1],
}

const CLOCK_INTERVAL: u64 = 4096;

impl Search {
    fn new(limits: SolveLimits) -> Self {
        Search {
            limits,
            started: Instant::now(),
            nodes: 0,
            next_clock_check: CLOCK_INTERVAL,
            table: FxHashMap::default(),
            killers: [None; MAX_DEPTH as usize + 1],
        }
    }

    fn tick(&mut self, n: u64) -> Result<(), SolveError> {
        self.nodes += n;
        if self.limits.max_nodes.is_some_and(|max| self.nodes > max) {
            return Err(SolveError::BudgetExhausted { nodes: self.nodes });
        }
        if let Some(max) = self.limits.max_time {
            if self.nodes >= self.next_clock_check {
                self.next_clock_check = self.nodes + CLOCK_INTERVAL;
                if self.started.elapsed() > max {
                    return Err(SolveError::BudgetExhausted { nodes: self.nodes });
                }
            }
        }
        Ok(())
    }

    fn mate_depth(&mut self, pos: &Position) -> Result<Option<u8>, SolveError> {
        for d in 1..=MAX_DEPTH {
            if self.white_mates(pos, d)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Minimal forced mate length after White has played into `after`.
    fn key_depth(&mut self, after: &Position, max: u8) -> Result<Option<u8>, SolveError> {
        for d in 1..=max {
            if self.black_loses(after, d)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// White's candidate moves for an `n`-move mate, checks first, then
    /// captures. With one move left only checks can mate.
    fn white_children(&mut self, pos: &Position, n: u8) -> Result<Vec<(Move, Position)>, SolveError> {
        let mut children = pos.legal_children();
        self.tick(children.len() as u64)?;
        if n == 1 {
            children.retain(|(m, _)| m.check);
        }
        children.sort_by_key(|(m, _)| (!m.check, !m.capture));
        Ok(children)
    }

    /// Can White, to move in `pos`, force mate within `n` moves?
    fn white_mates(&mut self, pos: &Position, n: u8) -> Result<bool, SolveError> {
        let key = pos.search_key();
        if let Some(b) = self.table.get(&key) {
            if b.mate_within <= n {
                return Ok(true);
            }
            if b.no_mate_within >= n {
                return Ok(false);
            }
        }
        let mut result = false;
        for (_, child) in self.white_children(pos, n)? {
            if self.black_loses(&child, n)? {
                result = true;
                break;
            }
        }
        let entry = self.table.entry(key).or_insert(Bounds {
            mate_within: u8::MAX,
            no_mate_within: 0,
        });
        if result {
            entry.mate_within = entry.mate_within.min(n);
        } else {
            entry.no_mate_within = entry.no_mate_within.max(n);
        }
        Ok(result)
    }

    /// Black to move in `pos`; White has just spent one of `n` moves. Is
    /// every Black reply answered by mate within the remaining `n - 1`?
    fn black_loses(&mut self, pos: &Position, n: u8) -> Result<bool, SolveError> {
        if n == 1 {
            self.tick(1)?;
            return Ok(pos.in_check() && !pos.has_legal_move());
        }
        let mut replies = pos.legal_children();
        self.tick(replies.len() as u64)?;
        if replies.is_empty() {
            return Ok(pos.in_check());
        }
        if let Some((from, to)) = self.killers[n as usize] {
            if let Some(i) = replies.iter().position(|(m, _)| m.from == from && m.to == to) {
                replies.swap(0, i);
            }
        }
        for (m, child) in &replies {
            if !self.white_mates(child, n - 1)? {
                self.killers[n as usize] = Some((m.from, m.to));
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Builds the subtree below White's move `mv`, which leads to `after`
    /// and forces mate in exactly `n`.
    fn build(&mut self, mv: Move, after: &Position, n: u8) -> Result<Continuation, SolveError> {
        if n == 1 {
            return Ok(Continuation {
                mv,
                mate_in: 1,
                defenses: Vec::new(),
            });
        }
        let replies = after.legal_children();
        let mut defenses = Vec::with_capacity(replies.len());
        for (r, p) in replies {
            let mut rest = 0;
            for d in 1..n {
                if self.white_mates(&p, d)? {
                    rest = d;
                    break;
                }
            }
            debug_assert!(rest > 0, "reply escapes a proven mate");
            let mut continuations = Vec::new();
            for (w, q) in p.legal_children() {
                if (rest > 1 || w.check) && self.black_loses(&q, rest)? {
                    continuations.push(self.build(w, &q, rest)?);
                }
            }
            defenses.push(Defense { mv: r, continuations });
        }
        Ok(Continuation {
            mv,
            mate_in: n,
            defenses,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::tree::count_leaves_by_replay;
    use super::*;
    use crate::chess::{parse_fen, parse_san};

    /// Plain minimax with no table, no ordering and no pruning by checks.
    fn naive_white(pos: &Position, n: u8) -> bool {
        pos.legal_children().iter().any(|(_, c)| naive_black(c, n))
    }

    fn naive_black(pos: &Position, n: u8) -> bool {
        let replies = pos.legal_children();
        if replies.is_empty() {
            return pos.in_check();
        }
        n > 1 && replies.iter().all(|(_, c)| naive_white(c, n - 1))
    }

    fn naive_depth(pos: &Position) -> Option<u8> {
        (1..=3).find(|&d| naive_white(pos, d))
    }

    const SMALL: &[&str] = &[
        "k7/2P5/3K4/8/8/8/8/8 w - - 0 1",
        "8/2P5/8/8/8/8/k1K5/8 w - - 0 1",
        "k7/8/1K6/8/8/8/8/7R w - - 0 1",
        "7k/8/6K1/8/8/8/8/R7 w - - 0 1",
        "k7/8/2K5/8/8/8/8/6Q1 w - - 0 1",
        "4k3/8/4K3/8/8/8/8/R7 w - - 0 1",
        "7k/5K2/8/8/8/8/8/6B1 w - - 0 1",
        "k7/8/8/8/8/8/8/K6R w - - 0 1",
    ];

    #[test]
    fn agrees_with_naive_minimax() {
        for fen in SMALL {
            let p = parse_fen(fen).unwrap();
            let fast = mate_depth(&p, SolveLimits::exhaustive()).unwrap();
            assert_eq!(fast, naive_depth(&p), "{fen}");
        }
    }

    #[test]
    fn keys_agree_with_naive_minimax() {
        for fen in SMALL {
            let p = parse_fen(fen).unwrap();
            let report = find_keys(&p, SolveLimits::exhaustive()).unwrap();
            let naive: Vec<String> = p
                .legal_children()
                .iter()
                .filter(|(_, c)| naive_black(c, 3))
                .map(|(m, _)| m.uci())
                .collect();
            let mut fast: Vec<String> = report.keys.iter().map(|m| m.uci()).collect();
            let mut sorted = naive.clone();
            sorted.sort();
            fast.sort();
            assert_eq!(fast, sorted, "{fen}");
        }
    }

    #[test]
    fn mate_in_one() {
        let p = parse_fen("k7/8/1K6/8/8/8/8/7R w - - 0 1").unwrap();
        let t = solve_mate3(&p, SolveLimits::default()).unwrap().unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.key.mv.uci(), "h1h8");
        assert!(t.verify());
        assert_eq!(t.main_line(), "1. Rh8#");
    }

    #[test]
    fn rook_promotion_problem() {
        let p = parse_fen("k7/2P5/3K4/8/8/8/8/8 w - - 0 1").unwrap();
        let report = find_keys(&p, SolveLimits::default()).unwrap();
        assert_eq!(report.shortest_mate_depth(), Some(3));
        let tree = report.tree.as_ref().unwrap();
        assert!(tree.verify());
        assert_eq!(count_variations(tree), count_leaves_by_replay(tree));
        let kc6 = parse_san(&p, "Kc6").unwrap();
        assert!(report.keys.iter().any(|k| k.same_squares(&kc6)));
    }

    #[test]
    fn stalemate_is_not_mate() {
        // Any quiet move stalemates; there is no mate at all.
        let p = parse_fen("k7/2K5/8/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(mate_depth(&p, SolveLimits::default()).unwrap(), None);
        let r = find_keys(&p, SolveLimits::default()).unwrap();
        assert!(r.keys.is_empty() && r.tree.is_none());
    }

    #[test]
    fn budget_is_reported() {
        let p = Position::initial();
        let err = find_keys(&p, SolveLimits::nodes(500)).unwrap_err();
        assert!(matches!(err, SolveError::BudgetExhausted { .. }));
        let p = parse_fen("4k3/8/8/8/8/8/8/4K3 b - - 0 1").unwrap();
        assert_eq!(
            find_keys(&p, SolveLimits::default()).unwrap_err(),
            SolveError::BlackToMove
        );
        assert_eq!(SolveLimits::new(None, None).unwrap_err(), SolveError::NoLimit);
    }

    /// Forced mate length after White's move, Black to move, built from
    /// `mate_depth` on each reply.
    fn forced_after(q: &Position) -> Option<u8> {
        if q.is_checkmate() {
            return Some(1);
        }
        let replies = q.legal_children();
        if replies.is_empty() {
            return None;
        }
        let mut worst = 0;
        for (_, r) in replies {
            worst = worst.max(mate_depth(&r, SolveLimits::default()).unwrap()?);
        }
        Some(worst + 1)
    }

    /// Dual counts recomputed by brute force along the tree's main play.
    fn dual_oracle(tree: &SolutionTree) -> (u32, u32) {
        let mut counts = [0u32; 4];
        fn walk(pos: &Position, c: &Continuation, white_move: usize, counts: &mut [u32; 4]) {
            let after = pos.make_move(&c.mv);
            for d in &c.defenses {
                let node = after.make_move(&d.mv);
                let lengths: Vec<Option<u8>> =
                    node.legal_children().iter().map(|(_, q)| forced_after(q)).collect();
                let best = lengths.iter().flatten().min().copied();
                let next = white_move + 1;
                if best.is_some() && lengths.iter().filter(|l| **l == best).count() > 1 && next < 4 {
                    counts[next] += 1;
                }
                walk(&node, d.main(), next, counts);
            }
        }
        walk(&tree.start, &tree.key, 1, &mut counts);
        (counts[2], counts[3])
    }

    #[test]
    fn duals_match_a_brute_force_count() {
        let fens = [
            "7k/8/8/8/8/8/R7/1R4K1 w - - 0 1",
            "k7/2P5/3K4/8/8/8/8/8 w - - 0 1",
            "8/7Q/8/2k2N2/R5K1/8/8/8 w - - 0 1",
        ];
        let mut any_dual = false;
        for fen in fens {
            let p = parse_fen(fen).unwrap();
            let tree = find_keys(&p, SolveLimits::default()).unwrap().tree.unwrap();
            assert!(tree.verify());
            let duals = detect_duals(&tree);
            assert_eq!(duals, dual_oracle(&tree), "{fen}");
            any_dual |= duals != (0, 0);
        }
        assert!(any_dual);
        let p = parse_fen("k7/2P5/3K4/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(detect_duals(&solve_mate3(&p, SolveLimits::default()).unwrap().unwrap()), (0, 0));
    }
}
