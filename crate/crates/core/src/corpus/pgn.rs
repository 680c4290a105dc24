use std::io::{Read, Write};

use crate::chess::{emit_fen, parse_fen, parse_san, to_san, Color, Move, Position};
use crate::composer::Composition;
use crate::solver::{Continuation, Defense, SolutionTree};

use super::CorpusError;

/// One move of a movetext line. `variations` are alternatives to this move,
/// each played from the position before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgnMove {
    pub mv: Move,
    pub san: String,
    pub variations: Vec<Vec<PgnMove>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PgnGame {
    pub tags: Vec<(String, String)>,
    pub start: Position,
    pub moves: Vec<PgnMove>,
    pub result: String,
}

impl PgnGame {
    pub fn tag(&self, name: &str) -> Option<&str> {
        self.tags.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }

    pub fn main_line(&self) -> Vec<Move> {
        self.moves.iter().map(|m| m.mv).collect()
    }

    /// Number of variation blocks anywhere in the movetext.
    pub fn variation_count(&self) -> usize {
        fn count(line: &[PgnMove]) -> usize {
            line.iter()
                .map(|m| m.variations.len() + m.variations.iter().map(|v| count(v)).sum::<usize>())
                .sum()
        }
        count(&self.moves)
    }
}

/// The solution tree as movetext: the first continuation and first defence
/// at each node form the main line, the others become variations.
pub fn movetext_of(tree: &SolutionTree) -> Vec<PgnMove> {
    white_line(&tree.start, std::slice::from_ref(&tree.key))
}

fn white_line(pos: &Position, conts: &[Continuation]) -> Vec<PgnMove> {
    let Some((first, rest)) = conts.split_first() else {
        return Vec::new();
    };
    let variations = rest
        .iter()
        .map(|c| white_line(pos, std::slice::from_ref(c)))
        .collect();
    let mut line = vec![PgnMove {
        mv: first.mv,
        san: to_san(pos, &first.mv),
        variations,
    }];
    line.extend(black_line(&pos.make_move(&first.mv), &first.defenses));
    line
}

fn black_line(pos: &Position, defenses: &[Defense]) -> Vec<PgnMove> {
    let Some((first, rest)) = defenses.split_first() else {
        return Vec::new();
    };
    let variations = rest
        .iter()
        .map(|d| black_line(pos, std::slice::from_ref(d)))
        .collect();
    let mut line = vec![PgnMove {
        mv: first.mv,
        san: to_san(pos, &first.mv),
        variations,
    }];
    line.extend(white_line(&pos.make_move(&first.mv), &first.continuations));
    line
}

fn escape(value: &str) -> String {
    value.replace('\\', "\\\\").replace('"', "\\\"")
}

fn movetext_tokens(pos: &Position, line: &[PgnMove], out: &mut Vec<String>) {
    let mut pos = *pos;
    let mut need_number = true;
    for m in line {
        let n = pos.fullmove_number();
        match pos.side_to_move() {
            Color::White => out.push(format!("{n}.")),
            Color::Black if need_number => out.push(format!("{n}...")),
            Color::Black => {}
        }
        out.push(m.san.clone());
        need_number = false;
        for v in &m.variations {
            let mut inner = Vec::new();
            movetext_tokens(&pos, v, &mut inner);
            if let Some(first) = inner.first_mut() {
                first.insert(0, '(');
            }
            if let Some(last) = inner.last_mut() {
                last.push(')');
            }
            out.extend(inner);
            need_number = true;
        }
        pos = pos.make_move(&m.mv);
    }
}

pub fn write_game<W: Write>(mut w: W, game: &PgnGame) -> std::io::Result<()> {
    for (name, value) in &game.tags {
        writeln!(w, "[{name} \"{}\"]", escape(value))?;
    }
    writeln!(w)?;
    let mut tokens = Vec::new();
    movetext_tokens(&game.start, &game.moves, &mut tokens);
    tokens.push(game.result.clone());
    let mut line = String::new();
    for t in tokens {
        if !line.is_empty() && line.len() + 1 + t.len() > 79 {
            writeln!(w, "{line}")?;
            line.clear();
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(&t);
    }
    writeln!(w, "{line}")?;
    writeln!(w)
}

/// One game per composition: the start position in the FEN tag, the
/// solution as movetext and the provenance in custom tags.
pub fn write_pgn<W: Write>(w: W, c: &Composition) -> Result<(), CorpusError> {
    let p = &c.provenance;
    let (d2, d3) = c.metrics.duals;
    let conventions: Vec<&str> = p.conventions.iter().map(|c| c.name()).collect();
    let tags = [
        ("Event", "Composition".to_string()),
        ("Site", "?".into()),
        ("Date", "????.??.??".into()),
        ("Round", "-".into()),
        ("White", "#3".into()),
        ("Black", "?".into()),
        ("Result", "1-0".into()),
        ("SetUp", "1".into()),
        ("FEN", emit_fen(&c.position)),
        ("Strategy", p.strategy.name().into()),
        ("SourceIds", p.source_ids.join(",")),
        ("Seed", p.seed.to_string()),
        ("Conventions", conventions.join(",")),
        ("Variations", c.metrics.variations.to_string()),
        ("Duals", format!("{d2},{d3}")),
    ];
    let game = PgnGame {
        tags: tags.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
        start: c.position,
        moves: movetext_of(&c.solution),
        result: "1-0".into(),
    };
    write_game(w, &game)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Tag(String, String),
    Open,
    Close,
    Symbol(String),
}

const RESULTS: [&str; 4] = ["1-0", "0-1", "1/2-1/2", "*"];

fn tokenize(text: &str) -> Result<Vec<Token>, CorpusError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut at_line_start = true;
    while let Some(c) = chars.next() {
        match c {
            '\n' => {
                at_line_start = true;
                continue;
            }
            '%' if at_line_start => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            c if c.is_whitespace() => continue,
            '[' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '"' {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
                if chars.next() != Some('"') {
                    return Err(CorpusError::Pgn(format!("tag {name} has no quoted value")));
                }
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => value.extend(chars.next()),
                        Some('"') => break,
                        Some(c) => value.push(c),
                        None => return Err(CorpusError::Pgn(format!("unterminated tag {name}"))),
                    }
                }
                while chars.peek().is_some_and(|&c| c != ']') {
                    chars.next();
                }
                if chars.next() != Some(']') {
                    return Err(CorpusError::Pgn(format!("unterminated tag {name}")));
                }
                tokens.push(Token::Tag(name, value));
            }
            '{' => {
                if !chars.by_ref().any(|c| c == '}') {
                    return Err(CorpusError::Pgn("unterminated comment".into()));
                }
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                at_line_start = true;
                continue;
            }
            '(' => tokens.push(Token::Open),
            ')' => tokens.push(Token::Close),
            _ => {
                let mut sym = String::from(c);
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "(){};[".contains(c) {
                        break;
                    }
                    sym.push(c);
                    chars.next();
                }
                if !sym.starts_with('$') {
                    tokens.push(Token::Symbol(sym));
                }
            }
        }
        at_line_start = false;
    }
    Ok(tokens)
}

/// Strips a leading move number (`12.`, `12...`, `12.e4`) and trailing
/// annotation glyphs; `None` if nothing is left.
fn move_text(sym: &str) -> Option<&str> {
    let mut s = sym;
    if s.starts_with(|c: char| c.is_ascii_digit()) {
        if let Some(i) = s.rfind('.') {
            s = &s[i + 1..];
        }
    }
    let s = s.trim_end_matches(['!', '?']);
    (!s.is_empty()).then_some(s)
}

fn parse_line(tokens: &[Token], i: &mut usize, start: Position) -> Result<Vec<PgnMove>, CorpusError> {
    let mut line: Vec<PgnMove> = Vec::new();
    let mut pos = start;
    let mut before = start;
    while let Some(tok) = tokens.get(*i) {
        match tok {
            Token::Close => return Ok(line),
            Token::Open => {
                *i += 1;
                let variation = parse_line(tokens, i, before)?;
                if tokens.get(*i) != Some(&Token::Close) {
                    return Err(CorpusError::Pgn("unclosed variation".into()));
                }
                *i += 1;
                line.last_mut()
                    .ok_or_else(|| CorpusError::Pgn("variation before any move".into()))?
                    .variations
                    .push(variation);
            }
            Token::Symbol(sym) => {
                *i += 1;
                let Some(text) = move_text(sym) else { continue };
                let mv = parse_san(&pos, text)
                    .map_err(|e| CorpusError::Pgn(format!("`{text}` in {}: {e}", emit_fen(&pos))))?;
                line.push(PgnMove {
                    mv,
                    san: to_san(&pos, &mv),
                    variations: Vec::new(),
                });
                before = pos;
                pos = pos.make_move(&mv);
            }
            Token::Tag(..) => unreachable!("tags are split off before movetext parsing"),
        }
    }
    Ok(line)
}

fn finish_game(tags: Vec<(String, String)>, body: &[Token], result: String) -> Result<PgnGame, CorpusError> {
    let start = match tags.iter().find(|(n, _)| n == "FEN") {
        Some((_, fen)) => parse_fen(fen).map_err(|e| CorpusError::Pgn(format!("FEN tag: {e}")))?,
        None => Position::initial(),
    };
    let mut i = 0;
    let moves = parse_line(body, &mut i, start)?;
    if i != body.len() {
        return Err(CorpusError::Pgn("unbalanced `)`".into()));
    }
    Ok(PgnGame {
        tags,
        start,
        moves,
        result,
    })
}

/// Reads every game in a PGN stream.
pub fn read_pgn<R: Read>(mut reader: R) -> Result<Vec<PgnGame>, CorpusError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut games = Vec::new();
    let mut tags = Vec::new();
    let mut body = Vec::new();
    for tok in tokenize(&text)? {
        match tok {
            Token::Tag(n, v) => {
                if !body.is_empty() {
                    games.push(finish_game(std::mem::take(&mut tags), &body, "*".into())?);
                    body.clear();
                }
                tags.push((n, v));
            }
            Token::Symbol(s) if RESULTS.contains(&s.as_str()) => {
                games.push(finish_game(std::mem::take(&mut tags), &body, s)?);
                body.clear();
            }
            other => body.push(other),
        }
    }
    if !tags.is_empty() || !body.is_empty() {
        games.push(finish_game(tags, &body, "*".into())?);
    }
    Ok(games)
}
