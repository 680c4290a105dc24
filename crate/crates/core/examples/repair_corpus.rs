//! Regenerates `data/corpus.tsv` from the verbatim table in
//! `data/corpus_printed.tsv`.
//!
//! Several printed FENs are malformed (seven or nine ranks, ranks of the
//! wrong width). For those the tool tries small edits to the board field:
//! inserting or deleting an empty rank, and adjusting one digit or piece
//! in a mis-sized rank. A candidate is accepted when the printed solution
//! replays legally on it and ends in mate. Every output row also carries
//! the solver's keys.
//!
//! Run with `cargo run --release -p dsns-core --example repair_corpus`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use dsns_core::chess::{emit_fen, parse_fen, parse_san, Position};
use dsns_core::solver::{find_keys, SolveLimits};

const PRINTED: &str = include_str!("../data/corpus_printed.tsv");

fn main() {
    let out_path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus.tsv");
    let mut out = String::from("index\tfen\tkeys\trepair\tprinted_fen\tprinted_solution\tsource\n");
    let mut unresolved = Vec::new();
    for line in PRINTED.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        let (index, fen, solution, source) = (cols[0], cols[1], cols[2], cols[3]);
        let (chosen, note) = match parse_fen(fen) {
            Ok(p) => (Some(p), "-".to_string()),
            Err(e) => repair(fen, solution, &e.to_string()),
        };
        let Some(pos) = chosen else {
            unresolved.push(index.to_string());
            eprintln!("#{index}: no repair found for {fen}");
            continue;
        };
        let report = find_keys(&pos, SolveLimits::nodes(10_000_000)).expect("solver budget");
        let keys: Vec<String> = report.keys.iter().map(|m| m.uci()).collect();
        let replay = if replays_to_mate(&pos, solution) { "" } else { " (printed line does not replay)" };
        eprintln!(
            "#{index}: {} keys [{}] {note}{replay}",
            keys.len(),
            keys.join(" ")
        );
        writeln!(
            out,
            "{index}\t{}\t{}\t{note}\t{fen}\t{solution}\t{source}",
            emit_fen(&pos),
            if keys.is_empty() { "-".to_string() } else { keys.join(" ") }
        )
        .unwrap();
    }
    if !unresolved.is_empty() {
        eprintln!("unresolved: {}", unresolved.join(", "));
        std::process::exit(1);
    }
    std::fs::write(out_path, out).expect("write fixture");
}

/// Replays the printed main line (move numbers and result marks skipped)
/// and reports whether it is legal and ends in checkmate.
fn replays_to_mate(start: &Position, solution: &str) -> bool {
    let mut pos = *start;
    let mut played = 0;
    for token in solution.split_whitespace() {
        if token.ends_with('.') || token == "0-1" || token == "1-0" {
            continue;
        }
        match parse_san(&pos, token) {
            Ok(m) => pos = pos.make_move(&m),
            Err(_) => return false,
        }
        played += 1;
    }
    played > 0 && pos.is_checkmate()
}

fn repair(fen: &str, solution: &str, error: &str) -> (Option<Position>, String) {
    let (board, rest) = fen.split_once(' ').expect("board and side fields");
    let ranks: Vec<String> = board.split('/').map(str::to_string).collect();
    let mut shapes: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    match ranks.len() {
        // A dropped trailing "8" is the most likely typo, so try the bottom
        // of the board first.
        7 => {
            for i in (0..=7).rev() {
                let mut r = ranks.clone();
                r.insert(i, "8".into());
                shapes.push((r, vec![format!("inserted empty rank {}", 8 - i)]));
            }
        }
        9 => {
            for i in (0..9).rev() {
                let mut r = ranks.clone();
                let gone = r.remove(i);
                shapes.push((r, vec![format!("dropped printed rank {} ({gone})", 9 - i)]));
            }
        }
        _ => shapes.push((ranks.clone(), Vec::new())),
    }

    // Keyed by the resulting FEN so a board reached by several edit paths
    // keeps its cheapest one.
    let mut accepted: BTreeMap<String, (usize, bool, usize, usize, Position, String)> = BTreeMap::new();
    let mut rejected = BTreeSet::new();
    let mut consider = |board: &[String], notes: Vec<String>| {
        let candidate = format!("{} {rest}", board.join("/"));
        let Ok(pos) = parse_fen(&candidate) else { return };
        let fen = emit_fen(&pos);
        if rejected.contains(&fen) {
            return;
        }
        if let Some(prev) = accepted.get_mut(&fen) {
            if notes.len() < prev.0 {
                prev.0 = notes.len();
                prev.5 = notes.join("; ");
            }
            return;
        }
        if !replays_to_mate(&pos, solution) {
            rejected.insert(fen);
            return;
        }
        let keys = find_keys(&pos, SolveLimits::nodes(10_000_000)).map(|r| r.keys).unwrap_or_default();
        let printed = printed_key(&pos, solution);
        let has_printed = keys.iter().any(|k| Some(k.uci()) == printed);
        let order = accepted.len();
        accepted.insert(fen, (notes.len(), !has_printed, keys.len(), order, pos, notes.join("; ")));
    };
    for (shape, shape_notes) in shapes {
        for (fixed, width_notes) in width_fixes(&shape) {
            let notes: Vec<String> = shape_notes.iter().chain(&width_notes).cloned().collect();
            consider(&fixed, notes.clone());
            // One wrong-case letter (usually a king of the wrong colour).
            for (i, rank) in fixed.iter().enumerate() {
                for (j, c) in rank.char_indices() {
                    if !c.is_ascii_alphabetic() {
                        continue;
                    }
                    let flipped = if c.is_ascii_uppercase() { c.to_ascii_lowercase() } else { c.to_ascii_uppercase() };
                    let mut b = fixed.clone();
                    b[i].replace_range(j..j + 1, &flipped.to_string());
                    let mut n = notes.clone();
                    n.push(format!("rank {} {} -> {}", 8 - i, rank, b[i]));
                    consider(&b, n);
                }
            }
        }
    }
    // Fewest edits, then the printed key confirmed by the solver, then the
    // fewest keys; generation order breaks remaining ties.
    let mut accepted: Vec<_> = accepted.into_values().collect();
    accepted.sort_by_key(|a| (a.0, a.1, a.2, a.3));
    let Some(best) = accepted.first() else {
        return (None, String::new());
    };
    let ties = accepted.iter().filter(|a| (a.0, a.1, a.2) == (best.0, best.1, best.2)).count();
    let mut note = format!("{error}: {}", best.5);
    if ties > 1 {
        eprintln!("  {ties} equally good candidates; taking the first");
        note.push_str(&format!(" (1 of {ties} candidates)"));
    }
    (Some(best.4), note)
}

fn printed_key(pos: &Position, solution: &str) -> Option<String> {
    let token = solution.split_whitespace().find(|t| !t.ends_with('.'))?;
    parse_san(pos, token).ok().map(|m| m.uci())
}

/// The ranks unchanged if all are eight files wide, otherwise every way of
/// fixing each mis-sized rank with one edit: changing a digit, inserting a
/// digit, deleting a character, or inserting a missing piece.
fn width_fixes(ranks: &[String]) -> Vec<(Vec<String>, Vec<String>)> {
    let mut results = vec![(ranks.to_vec(), Vec::new())];
    for (i, rank) in ranks.iter().enumerate() {
        let w = width(rank);
        if w == 8 {
            continue;
        }
        let label = 8 - i;
        let mut options: Vec<(String, String)> = Vec::new();
        let chars: Vec<char> = rank.chars().collect();
        for (j, c) in chars.iter().enumerate() {
            if let Some(d) = c.to_digit(10) {
                let nd = d as i32 + 8 - w as i32;
                if (1..=8).contains(&nd) {
                    let mut s = chars.clone();
                    s[j] = char::from_digit(nd as u32, 10).unwrap();
                    options.push((s.iter().collect(), format!("rank {label} {rank} -> {}", s.iter().collect::<String>())));
                }
            }
            let mut s = chars.clone();
            s.remove(j);
            let s: String = s.into_iter().collect();
            if width(&s) == 8 {
                options.push((s.clone(), format!("rank {label} {rank} -> {s}")));
            }
        }
        if w < 8 {
            for j in 0..=chars.len() {
                let mut s = chars.clone();
                s.insert(j, char::from_digit((8 - w) as u32, 10).unwrap());
                let s: String = s.into_iter().collect();
                options.push((s.clone(), format!("rank {label} {rank} -> {s}")));
            }
            if w == 7 {
                for j in 0..=chars.len() {
                    for piece in "PNBRQKpnbrqk".chars() {
                        let mut s = chars.clone();
                        s.insert(j, piece);
                        let s: String = s.into_iter().collect();
                        options.push((s.clone(), format!("rank {label} {rank} -> {s}")));
                    }
                }
            }
        }
        let mut next = Vec::new();
        for (base, note) in &results {
            for (opt, opt_note) in &options {
                let mut r = base.clone();
                r[i] = opt.clone();
                let mut notes = note.clone();
                notes.push(opt_note.clone());
                next.push((r, notes));
            }
        }
        results = next;
    }
    results
}

fn width(rank: &str) -> usize {
    rank.chars()
        .map(|c| c.to_digit(10).map_or(1, |d| d as usize))
        .sum()
}
