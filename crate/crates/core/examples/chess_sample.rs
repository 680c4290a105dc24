//! Regenerates `data/chess_sample.csv`: the chess attributes of every
//! corpus composition, measured over its printed solution when that replays
//! and over the solver's main line otherwise.
//!
//! Run with `cargo run --release -p dsns-core --example chess_sample`.

use dsns_core::attributes::{chess_attributes, ChessSequence, CHESS_SCHEMA};
use dsns_core::corpus::{load_corpus, write_strings_csv};
use dsns_core::solver::{find_keys, SolveLimits};

fn main() {
    let out_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/chess_sample.csv");
    let mut strings = Vec::new();
    for entry in load_corpus().expect("bundled corpus") {
        let printed = ChessSequence::from_san(entry.position, &entry.printed_solution, None)
            .ok()
            .filter(|s| s.final_position().is_checkmate());
        let seq = printed.unwrap_or_else(|| {
            let report = find_keys(&entry.position, SolveLimits::nodes(10_000_000)).expect("solver budget");
            let line = report.tree.expect("every entry has a key").main_line();
            eprintln!("#{}: using solver line {line}", entry.index);
            ChessSequence::from_san(entry.position, &line, None).expect("solver line replays")
        });
        let mut s = chess_attributes(&seq);
        s.object_id = format!("c{}", entry.index);
        strings.push(s);
    }
    let schema: Vec<String> = CHESS_SCHEMA.iter().map(|s| s.to_string()).collect();
    let file = std::fs::File::create(out_path).expect("create sample");
    write_strings_csv(file, &schema, &strings).expect("write sample");
}
