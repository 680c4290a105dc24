//! Checks on emitted compositions that recompute everything from the FEN and
//! the source strings rather than trusting the composer's own bookkeeping.

use dsns_core::attributes::CHESS_SCHEMA;
use dsns_core::chess::{emit_fen, Position};
use dsns_core::composer::{optimize_with, Composition};
use dsns_core::dsns::DsnsString;
use dsns_core::solver::{find_keys, mate_depth, SolveLimits};

pub const LIMITS: u64 = 10_000_000;

/// Board squares read from the first FEN field: (rank 0..8 from the top,
/// file 0..8, piece char).
pub fn board(fen: &str) -> Vec<(i32, i32, char)> {
    let mut out = Vec::new();
    for (r, rank) in fen.split(' ').next().unwrap().split('/').enumerate() {
        let mut f = 0;
        for c in rank.chars() {
            match c.to_digit(10) {
                Some(n) => f += n as i32,
                None => {
                    out.push((r as i32, f, c));
                    f += 1;
                }
            }
        }
    }
    out
}

pub fn counts(fen: &str) -> (u32, u32) {
    let b = board(fen);
    let white = b.iter().filter(|p| p.2.is_ascii_uppercase()).count() as u32;
    (white, b.len() as u32 - white)
}

fn value(c: char) -> i64 {
    match c.to_ascii_lowercase() {
        'p' => 1,
        'n' | 'b' => 3,
        'r' => 5,
        'q' => 9,
        _ => 0,
    }
}

pub fn material_gap(fen: &str) -> i64 {
    let b = board(fen);
    let side = |upper: bool| b.iter().filter(|p| p.2.is_ascii_uppercase() == upper).map(|p| value(p.2)).sum::<i64>();
    (side(true) - side(false)).abs()
}

pub fn sparsity(fen: &str) -> f64 {
    let b = board(fen);
    let touching: usize = b
        .iter()
        .map(|&(r, f, _)| {
            b.iter()
                .filter(|&&(r2, f2, _)| (r2, f2) != (r, f) && (r2 - r).abs() <= 1 && (f2 - f).abs() <= 1)
                .count()
        })
        .sum();
    1.0 / (touching as f64 / b.len() as f64 + 1.0)
}

fn attr(s: &DsnsString, name: &str) -> Option<f64> {
    let i = CHESS_SCHEMA.iter().position(|n| *n == name).unwrap();
    s.values()[i]
}

/// Limits the two source strings put on a composition.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub white: Option<(u32, u32)>,
    pub black: Option<(u32, u32)>,
    pub material: Option<f64>,
    /// `Some(true)`: at least 0.25. `Some(false)`: at most 0.75.
    pub sparse: Option<bool>,
}

impl Bounds {
    pub fn open() -> Self {
        Bounds {
            white: None,
            black: None,
            material: None,
            sparse: None,
        }
    }

    pub fn of(s1: &DsnsString, s2: &DsnsString) -> Self {
        let range = |name: &str| {
            let v: Vec<f64> = [attr(s1, name), attr(s2, name)].into_iter().flatten().collect();
            if v.is_empty() {
                return None;
            }
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min).round().clamp(1.0, 16.0) as u32;
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max).round().clamp(1.0, 16.0) as u32;
            Some((lo, hi))
        };
        let material = [attr(s1, "value_difference"), attr(s2, "value_difference")]
            .into_iter()
            .flatten()
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        let sparse = match (attr(s1, "sparsity"), attr(s2, "sparsity")) {
            (Some(a), Some(b)) => Some(a + b >= 1.0),
            _ => None,
        };
        Bounds {
            white: range("white_pieces"),
            black: range("black_pieces"),
            material,
            sparse,
        }
    }

    pub fn admit(&self, fen: &str) -> Result<(), String> {
        let (w, b) = counts(fen);
        for (name, n, r) in [("white", w, self.white), ("black", b, self.black)] {
            if let Some((lo, hi)) = r {
                if n < lo || n > hi {
                    return Err(format!("{name} count {n} outside {lo}..={hi}"));
                }
            }
        }
        if let Some(cap) = self.material {
            let gap = material_gap(fen);
            if gap as f64 > cap + 1e-9 {
                return Err(format!("material gap {gap} above {cap}"));
            }
        }
        let s = sparsity(fen);
        match self.sparse {
            Some(true) if s < 0.25 => Err(format!("sparsity {s} below 0.25")),
            Some(false) if s > 0.75 => Err(format!("sparsity {s} above 0.75")),
            _ => Ok(()),
        }
    }
}

/// Runs the whole validity suite on one emission.
pub fn validate(c: &Composition, no_check_key: bool) -> Result<(), String> {
    let fen = c.fen();
    let limits = SolveLimits::nodes(LIMITS);
    let report = find_keys(&c.position, limits).map_err(|e| format!("{fen}: {e}"))?;
    if report.shortest_mate_depth() != Some(3) {
        return Err(format!("{fen}: mate depth {:?}", report.shortest_mate_depth()));
    }
    let bounds = match &c.provenance.strings {
        Some((a, b)) => Bounds::of(a, b),
        None => Bounds::open(),
    };
    bounds.admit(&fen).map_err(|e| format!("{fen}: {e}"))?;
    let again = optimize_with(&c.position, limits, 3, |p: &Position| bounds.admit(&emit_fen(p)).is_ok());
    if again != c.position {
        return Err(format!("{fen}: optimizes further to {}", emit_fen(&again)));
    }
    if no_check_key {
        let key = &report.keys[0];
        if c.position.make_move(key).in_check() {
            return Err(format!("{fen}: checking key {key:?}"));
        }
    }
    if mate_depth(&c.position, limits).map_err(|e| e.to_string())? != Some(3) {
        return Err(format!("{fen}: mate_depth disagrees"));
    }
    Ok(())
}
