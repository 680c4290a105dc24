use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use dsns_core::attributes::{
    audio_attributes, chess_attributes, image_attributes, ChessSequence, PcmAudio, RasterImage, AUDIO_SCHEMA,
    CHESS_SCHEMA, IMAGE_SCHEMA,
};
use dsns_core::chess::{emit_fen, parse_fen, to_san, Position};
use dsns_core::composer::{
    bench_matrix, build_experience_table, check_conventions, compose_cycle, parse_conventions, ComposerConfig,
    ComposerError, Convention, CycleBudget, ExperienceTable, Sources, StrategyKind,
};
use dsns_core::corpus::{
    chess_sample, load_corpus, movetext_of, read_attribute_csv, read_pgn, write_game, write_pgn, write_strings_csv,
    CorpusError, PgnGame,
};
use dsns_core::dsns::{deviation_at, merge_deviations, Deviation, DsnsString, Sample};
use dsns_core::solver::{find_keys, SolveError, SolveLimits};

use crate::args::{BenchArgs, ComposeArgs, ComposerArgs, DeviationArgs, ExtractArgs, Kind, MergeArgs, SolveArgs};
use crate::error::{io, usage, CliError};

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io(p.display(), e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_err(e: io::Error) -> CliError {
    io("write", e)
}

fn corpus_err(context: impl std::fmt::Display, e: CorpusError) -> CliError {
    io(context, e)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn extension(path: &Path) -> String {
    path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase()).unwrap_or_default()
}

fn year_of(game: &PgnGame) -> Option<i32> {
    game.tag("Date")?.get(..4)?.parse().ok()
}

fn chess_rows(path: &Path) -> Result<Vec<DsnsString>, String> {
    let file = File::open(path).map_err(|e| e.to_string())?;
    let games = read_pgn(io::BufReader::new(file)).map_err(|e| e.to_string())?;
    let single = games.len() == 1;
    let mut rows = Vec::new();
    for (i, game) in games.iter().enumerate() {
        let id = if single { stem(path) } else { format!("{}-{}", stem(path), i + 1) };
        match ChessSequence::new(game.start, game.main_line(), year_of(game)) {
            Ok(seq) => {
                let mut s = chess_attributes(&seq);
                s.object_id = id;
                rows.push(s);
            }
            Err(e) => eprintln!("warning: {}: game {}: {e}", path.display(), i + 1),
        }
    }
    Ok(rows)
}

pub fn extract(a: &ExtractArgs) -> Result<(), CliError> {
    let schema: &[&str] = match a.kind {
        Kind::Chess => &CHESS_SCHEMA,
        Kind::Image => &IMAGE_SCHEMA,
        Kind::Audio => &AUDIO_SCHEMA,
    };
    let mut rows = Vec::new();
    for path in &a.inputs {
        let ext = extension(path);
        let result = match a.kind {
            Kind::Chess if ext == "pgn" => chess_rows(path),
            Kind::Image if ["pgm", "ppm", "pbm", "pnm"].contains(&ext.as_str()) => RasterImage::read_pnm(path)
                .map(|img| vec![image_attributes(&stem(path), &img)])
                .map_err(|e| e.to_string()),
            Kind::Audio if ext == "wav" => PcmAudio::read_wav(path)
                .map(|pcm| vec![audio_attributes(&stem(path), &pcm)])
                .map_err(|e| e.to_string()),
            _ => Err(format!("unsupported file type `.{ext}`")),
        };
        match result {
            Ok(r) => rows.extend(r),
            Err(e) => eprintln!("warning: skipping {}: {e}", path.display()),
        }
    }
    if rows.is_empty() {
        return Err(CliError::Io("no rows extracted".into()));
    }
    let schema: Vec<String> = schema.iter().map(|s| s.to_string()).collect();
    let mut out = output(a.out.as_deref())?;
    write_strings_csv(&mut out, &schema, &rows).map_err(|e| corpus_err("write", e))?;
    out.flush().map_err(write_err)?;
    eprintln!("{} rows", rows.len());
    Ok(())
}

fn read_sample(path: &Path, domain: &str) -> Result<Sample, CliError> {
    let file = File::open(path).map_err(|e| io(path.display(), e))?;
    read_attribute_csv(io::BufReader::new(file), domain, None).map_err(|e| corpus_err(path.display(), e))
}

fn chess_sample_from(path: Option<&Path>) -> Result<Sample, CliError> {
    match path {
        Some(p) => {
            let file = File::open(p).map_err(|e| io(p.display(), e))?;
            read_attribute_csv(io::BufReader::new(file), "chess", Some(&CHESS_SCHEMA))
                .map_err(|e| corpus_err(p.display(), e))
        }
        None => chess_sample().map_err(|e| corpus_err("bundled sample", e)),
    }
}

pub fn deviation(a: &DeviationArgs) -> Result<(), CliError> {
    let sample = match &a.sample {
        Some(p) => read_sample(p, "sample")?,
        None => chess_sample_from(None)?,
    };
    let find = |id: &str| {
        sample
            .strings()
            .iter()
            .find(|s| s.object_id == id)
            .ok_or_else(|| usage(format!("no string with id `{id}`")))
    };
    let d = deviation_at(find(&a.first)?, find(&a.second)?, a.precision).map_err(usage)?;
    println!("{}", d.render());
    Ok(())
}

pub fn merge(a: &MergeArgs) -> Result<(), CliError> {
    let merged = merge_deviations(Deviation::new(a.target, a.precision), Deviation::new(a.other, a.precision));
    println!("{}", merged.render());
    Ok(())
}

fn composer_config(a: &ComposerArgs) -> Result<ComposerConfig, CliError> {
    let config = ComposerConfig {
        strategy: a.strategy.parse().map_err(usage)?,
        conventions: parse_conventions(&a.conventions).map_err(usage)?,
        strict_duals: a.strict_duals,
        limits: SolveLimits::nodes(a.nodes),
        placement_cap: a.placement_cap,
        passes: a.passes,
        seed: a.seed,
        precision: a.precision,
        max_random_pieces: a.max_random_pieces,
        ..Default::default()
    };
    config.validate().map_err(usage)?;
    if a.workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    Ok(config)
}

fn budget(a: &ComposerArgs) -> Result<CycleBudget, CliError> {
    match (a.budget_attempts, a.budget_seconds) {
        (Some(n), _) => Ok(CycleBudget::attempts(n)),
        (None, Some(s)) if s.is_finite() && s >= 0.0 => Ok(CycleBudget::duration(Duration::from_secs_f64(s))),
        (None, Some(_)) => Err(usage("--budget-seconds must be a non-negative number")),
        (None, None) => Ok(CycleBudget::attempts(1000)),
    }
}

/// Owned inputs that a [`Sources`] borrows from.
struct Loaded {
    sample: Option<Sample>,
    foreign: Vec<Sample>,
    table: Option<ExperienceTable>,
}

impl Loaded {
    fn load(a: &ComposerArgs, strategies: &[StrategyKind]) -> Result<Self, CliError> {
        let mut loaded = Loaded {
            sample: None,
            foreign: Vec::new(),
            table: None,
        };
        if strategies.contains(&StrategyKind::Dsns) {
            loaded.sample = Some(chess_sample_from(a.sample.as_deref())?);
            for path in a.foreign.iter().flat_map(|f| f.split(',')).filter(|p| !p.trim().is_empty()) {
                let path = Path::new(path.trim());
                loaded.foreign.push(read_sample(path, &stem(path))?);
            }
        } else if a.foreign.is_some() {
            return Err(usage("--foreign needs the dsns strategy"));
        }
        if strategies.contains(&StrategyKind::ExperienceTable) {
            let positions = match &a.table_corpus {
                Some(p) => {
                    let file = File::open(p).map_err(|e| io(p.display(), e))?;
                    let games = read_pgn(io::BufReader::new(file)).map_err(|e| corpus_err(p.display(), e))?;
                    games.into_iter().map(|g| g.start).collect()
                }
                None => load_corpus()
                    .map_err(|e| corpus_err("bundled corpus", e))?
                    .into_iter()
                    .map(|e| e.position)
                    .collect::<Vec<_>>(),
            };
            loaded.table = Some(build_experience_table(&positions).map_err(usage)?);
        }
        Ok(loaded)
    }
}

fn run_composer<T>(
    a: &ComposerArgs,
    strategies: &[StrategyKind],
    f: impl FnOnce(&Sources) -> Result<T, ComposerError>,
) -> Result<T, CliError> {
    let loaded = Loaded::load(a, strategies)?;
    let foreign: Vec<&Sample> = loaded.foreign.iter().collect();
    let sources = Sources {
        sample: loaded.sample.as_ref(),
        foreign: &foreign,
        table: loaded.table.as_ref(),
    };
    f(&sources).map_err(usage)
}

pub fn compose(a: &ComposeArgs) -> Result<(), CliError> {
    let config = composer_config(&a.composer)?;
    let budget = budget(&a.composer)?;
    let result = run_composer(&a.composer, &[config.strategy], |s| {
        compose_cycle(s, &config, budget, a.composer.workers)
    })?;
    let mut out = output(a.out.as_deref())?;
    for c in &result.compositions {
        write_pgn(&mut out, c).map_err(|e| corpus_err("write", e))?;
    }
    out.flush().map_err(write_err)?;
    let s = result.stats;
    let mean = result.mean_variations().map_or("-".to_string(), |m| format!("{m:.2}"));
    eprintln!(
        "attempts: {}; emitted: {}; cph: {:.2}; mean variations: {mean}; pairs: {}; solver calls: {}; elapsed: {:.1}s",
        s.attempts,
        s.emitted,
        s.cph(),
        s.pairs,
        s.solver_calls,
        s.elapsed.as_secs_f64()
    );
    Ok(())
}

fn solve_inputs(input: &str) -> Result<Vec<Position>, CliError> {
    let path = Path::new(input);
    if extension(path) == "pgn" {
        let file = File::open(path).map_err(|e| io(path.display(), e))?;
        let games = read_pgn(io::BufReader::new(file)).map_err(|e| corpus_err(path.display(), e))?;
        if games.is_empty() {
            return Err(CliError::Io(format!("{}: no games", path.display())));
        }
        return Ok(games.into_iter().map(|g| g.start).collect());
    }
    parse_fen(input).map(|p| vec![p]).map_err(|e| usage(format!("`{input}`: {e}")))
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn solve(a: &SolveArgs) -> Result<(), CliError> {
    let time = match a.seconds {
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(_) => return Err(usage("--seconds must be positive")),
        None => None,
    };
    let limits = SolveLimits::new(time, Some(a.nodes)).map_err(usage)?;
    let conventions = match &a.conventions {
        Some(list) => parse_conventions(list).map_err(usage)?,
        None => Convention::ALL.to_vec(),
    };
    let positions = solve_inputs(&a.input)?;
    let many = positions.len() > 1;
    let mut out = io::stdout().lock();
    for (i, pos) in positions.iter().enumerate() {
        if many {
            if i > 0 {
                writeln!(out).map_err(write_err)?;
            }
            writeln!(out, "{}", emit_fen(pos)).map_err(write_err)?;
        }
        let report = match find_keys(pos, limits) {
            Ok(r) => r,
            Err(e @ SolveError::BudgetExhausted { .. }) => return Err(CliError::Budget(e.to_string())),
            Err(e) => return Err(usage(e)),
        };
        let Some(tree) = &report.tree else {
            writeln!(out, "no mate in 3").map_err(write_err)?;
            continue;
        };
        let sans: Vec<String> = report.keys.iter().map(|m| to_san(pos, m)).collect();
        writeln!(
            out,
            "{}: {}; mate in {}; cooked: {}",
            plural(sans.len(), "key"),
            sans.join(", "),
            report.key_depths[0],
            if report.is_cooked() { "yes" } else { "no" }
        )
        .map_err(write_err)?;
        if a.all_keys {
            for (san, d) in sans.iter().zip(&report.key_depths) {
                writeln!(out, "  {san} #{d}").map_err(write_err)?;
            }
        }
        let game = PgnGame {
            tags: Vec::new(),
            start: *pos,
            moves: movetext_of(tree),
            result: "*".into(),
        };
        let mut text = Vec::new();
        write_game(&mut text, &game).map_err(write_err)?;
        let text = String::from_utf8_lossy(&text);
        writeln!(out, "solution:\n{}", text.trim().trim_end_matches('*').trim_end()).map_err(write_err)?;
        let (d2, d3) = report.duals();
        writeln!(out, "variations: {}; duals: {d2} at move 2, {d3} at move 3", report.variations())
            .map_err(write_err)?;
        let conv = check_conventions(pos, &report, &conventions, a.strict_duals);
        let listed: Vec<String> = conv
            .results
            .iter()
            .map(|(c, ok)| format!("{} {}", c.name(), if *ok { "yes" } else { "no" }))
            .collect();
        if !listed.is_empty() {
            writeln!(out, "conventions: {}", listed.join(", ")).map_err(write_err)?;
        }
    }
    Ok(())
}

fn fmt_mean(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.2}"))
}

pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    let base = composer_config(&a.composer)?;
    let budget = budget(&a.composer)?;
    let strategies: Vec<StrategyKind> = a
        .strategies
        .split(',')
        .map(|s| s.trim().parse().map_err(usage))
        .collect::<Result<_, _>>()?;
    let sets: Vec<Vec<Convention>> = a
        .convention_sets
        .split(';')
        .map(|s| parse_conventions(s).map_err(usage))
        .collect::<Result<_, _>>()?;
    let cells = run_composer(&a.composer, &strategies, |s| {
        bench_matrix(s, &base, &strategies, &sets, a.cycles, budget, a.composer.workers)
    })?;
    let mut out = io::stdout().lock();
    let header = format!(
        "{:<17} {:<40} {:>6} {:>9} {:>7} {:>10} {:>6} {:>10} {:>6} {:>8}",
        "strategy", "conventions", "cycles", "attempts", "emitted", "cph", "pieces", "variations", "duals", "sparsity"
    );
    writeln!(out, "{header}").map_err(write_err)?;
    for c in &cells {
        let names: Vec<&str> = c.conventions.iter().map(|c| c.name()).collect();
        let conventions = if names.is_empty() { "none".to_string() } else { names.join(",") };
        writeln!(
            out,
            "{:<17} {:<40} {:>6} {:>9} {:>7} {:>10.2} {:>6} {:>10} {:>6} {:>8}",
            c.strategy.name(),
            conventions,
            c.cycles,
            c.attempts,
            c.emitted,
            c.cph_mean,
            fmt_mean(c.mean_pieces),
            fmt_mean(c.mean_variations),
            fmt_mean(c.mean_duals),
            fmt_mean(c.mean_sparsity)
        )
        .map_err(write_err)?;
    }
    if a.per_cycle {
        writeln!(out).map_err(write_err)?;
        writeln!(
            out,
            "{:<17} {:<40} {:>6} {:>9} {:>7} {:>10} {:>10}",
            "strategy", "conventions", "cycle", "attempts", "emitted", "cph", "seconds"
        )
        .map_err(write_err)?;
        for c in &cells {
            let names: Vec<&str> = c.conventions.iter().map(|c| c.name()).collect();
            let conventions = if names.is_empty() { "none".to_string() } else { names.join(",") };
            for (i, s) in c.per_cycle.iter().enumerate() {
                writeln!(
                    out,
                    "{:<17} {:<40} {:>6} {:>9} {:>7} {:>10.2} {:>10.2}",
                    c.strategy.name(),
                    conventions,
                    i + 1,
                    s.attempts,
                    s.emitted,
                    s.cph(),
                    s.elapsed.as_secs_f64()
                )
                .map_err(write_err)?;
            }
        }
    }
    out.flush().map_err(write_err)
}
