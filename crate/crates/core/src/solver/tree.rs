use crate::chess::{to_san, Move, Position};

/// A White move in the solution, with every Black reply it allows. A move
/// with no defenses delivers mate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuation {
    pub mv: Move,
    /// Forced mate length from the position before `mv`, counting `mv`.
    pub mate_in: u8,
    pub defenses: Vec<Defense>,
}

/// A Black reply together with every White continuation that keeps the
/// shortest available forced mate. More than one continuation is a dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defense {
    pub mv: Move,
    pub continuations: Vec<Continuation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTree {
    pub start: Position,
    pub key: Continuation,
}

impl Continuation {
    pub fn is_mate(&self) -> bool {
        self.defenses.is_empty()
    }

    fn leaves(&self) -> u32 {
        if self.defenses.is_empty() {
            1
        } else {
            self.defenses.iter().map(Defense::leaves).sum()
        }
    }
}

impl Defense {
    /// The first retained continuation; the one printed as the solution.
    pub fn main(&self) -> &Continuation {
        &self.continuations[0]
    }

    fn leaves(&self) -> u32 {
        self.continuations.first().map_or(0, Continuation::leaves)
    }
}

impl SolutionTree {
    /// Forced mate length of the key.
    pub fn depth(&self) -> u8 {
        self.key.mate_in
    }

    /// Number of distinct Black defence lines, following the main
    /// continuation after each defence.
    pub fn variations(&self) -> u32 {
        self.key.leaves()
    }

    /// Defence nodes on the main play where White has more than one
    /// mating continuation, split by White's move number (2nd, 3rd).
    pub fn duals(&self) -> (u32, u32) {
        let mut counts = [0u32; 4];
        fn walk(c: &Continuation, white_move: usize, counts: &mut [u32; 4]) {
            for d in &c.defenses {
                let next = white_move + 1;
                if d.continuations.len() > 1 && next < counts.len() {
                    counts[next] += 1;
                }
                if let Some(main) = d.continuations.first() {
                    walk(main, next, counts);
                }
            }
        }
        walk(&self.key, 1, &mut counts);
        (counts[2], counts[3])
    }

    /// Re-checks the tree against the rules: every Black reply is listed
    /// exactly once at each node, every continuation is legal, and every
    /// leaf is checkmate within three White moves.
    pub fn verify(&self) -> bool {
        fn check(pos: &Position, c: &Continuation, budget: u8) -> bool {
            if budget == 0 || pos.find_move(&c.mv).is_none() {
                return false;
            }
            let after = pos.make_move(&c.mv);
            if c.defenses.is_empty() {
                return after.is_checkmate();
            }
            let replies = after.legal_moves();
            if replies.len() != c.defenses.len() {
                return false;
            }
            for r in &replies {
                if c.defenses.iter().filter(|d| d.mv.same_squares(r)).count() != 1 {
                    return false;
                }
            }
            c.defenses.iter().all(|d| {
                let p = after.make_move(&d.mv);
                !d.continuations.is_empty()
                    && d.continuations.iter().all(|k| check(&p, k, budget - 1))
            })
        }
        check(&self.start, &self.key, 3)
    }

    /// The main line as SAN, e.g. `1. Kc6 Ka7 2. c8=R Ka6 3. Ra8#`.
    pub fn main_line(&self) -> String {
        let mut out = String::new();
        let mut pos = self.start;
        let mut c = &self.key;
        let mut number = 1;
        loop {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&format!("{}. {}", number, to_san(&pos, &c.mv)));
            pos = pos.make_move(&c.mv);
            let Some(d) = c.defenses.first() else { break };
            out.push(' ');
            out.push_str(&to_san(&pos, &d.mv));
            pos = pos.make_move(&d.mv);
            c = d.main();
            number += 1;
        }
        out
    }
}

/// Independent leaf walk: counts complete Black reply sequences by
/// replaying them on the board rather than trusting the tree's shape.
#[cfg(test)]
pub(crate) fn count_leaves_by_replay(tree: &SolutionTree) -> u32 {
    fn walk(pos: &Position, c: &Continuation) -> u32 {
        let after = pos.make_move(&c.mv);
        if after.is_checkmate() {
            return 1;
        }
        c.defenses
            .iter()
            .map(|d| {
                let p = after.make_move(&d.mv);
                walk(&p, d.main())
            })
            .sum()
    }
    walk(&tree.start, &tree.key)
}
