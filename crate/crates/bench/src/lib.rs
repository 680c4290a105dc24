//! Shared fixtures for the criterion benchmarks.

use dsns_core::chess::{parse_fen, Position};
use dsns_core::corpus::load_corpus;

pub const KIWIPETE: &str = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";

pub fn kiwipete() -> Position {
    parse_fen(KIWIPETE).expect("valid FEN")
}

/// The first `n` bundled corpus positions.
pub fn corpus_positions(n: usize) -> Vec<Position> {
    load_corpus()
        .expect("bundled corpus")
        .into_iter()
        .take(n)
        .map(|e| e.position)
        .collect()
}
