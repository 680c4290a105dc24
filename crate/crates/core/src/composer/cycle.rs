use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsns::{deviation_at, random_pair, search_merged, search_pair_with, DsnsError, DsnsString, Sample};

use super::placement::{Meter, Plan, Workshop};
use super::{Composition, ComposerConfig, ComposerError, Constraints, ExperienceTable, Provenance, StrategyKind};

/// Inputs a strategy draws on: a chess sample (and foreign samples for the
/// cross-domain mode) for DSNS, a table for the experience baseline.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sources<'a> {
    pub sample: Option<&'a Sample>,
    pub foreign: &'a [&'a Sample],
    pub table: Option<&'a ExperienceTable>,
}

/// Stop after this many attempts or this much time, whichever comes first.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CycleBudget {
    pub attempts: Option<u64>,
    pub duration: Option<Duration>,
}

impl CycleBudget {
    pub fn attempts(n: u64) -> Self {
        CycleBudget {
            attempts: Some(n),
            duration: None,
        }
    }

    pub fn duration(d: Duration) -> Self {
        CycleBudget {
            attempts: None,
            duration: Some(d),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CycleStats {
    pub attempts: u64,
    pub solver_calls: u64,
    /// String pairs drawn (DSNS) or random supplies tried (baselines).
    pub pairs: u64,
    pub emitted: u64,
    pub elapsed: Duration,
}

impl CycleStats {
    /// Compositions per hour of wall-clock time; zero for an instant run.
    pub fn cph(&self) -> f64 {
        let hours = self.elapsed.as_secs_f64() / 3600.0;
        if hours > 0.0 {
            self.emitted as f64 / hours
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleResult {
    pub compositions: Vec<Composition>,
    pub stats: CycleStats,
}

impl CycleResult {
    pub fn mean_variations(&self) -> Option<f64> {
        let n = self.compositions.len();
        (n > 0).then(|| self.compositions.iter().map(|c| c.metrics.variations as f64).sum::<f64>() / n as f64)
    }
}

fn check_sources(sources: &Sources, strategy: StrategyKind) -> Result<(), ComposerError> {
    match strategy {
        StrategyKind::Dsns if sources.sample.is_none() => {
            Err(ComposerError::MissingSource(strategy, "a chess sample"))
        }
        StrategyKind::ExperienceTable if sources.table.is_none() => {
            Err(ComposerError::MissingSource(strategy, "an experience table"))
        }
        _ => Ok(()),
    }
}

/// Composes from one given string pair until the first composition or until
/// `config.attempts` is spent.
pub fn compose_one(s1: &DsnsString, s2: &DsnsString, config: &ComposerConfig) -> Result<Option<Composition>, ComposerError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut meter = Meter::new(Some(config.attempts), None);
    let provenance = Provenance {
        strategy: StrategyKind::Dsns,
        source_ids: vec![s1.object_id.clone(), s2.object_id.clone()],
        strings: Some((s1.clone(), s2.clone())),
        seed: config.seed,
        conventions: config.conventions.clone(),
        strict_duals: config.strict_duals,
    };
    let mut found = None;
    let mut shop = Workshop {
        config,
        rng: &mut rng,
        meter: &mut meter,
        table: None,
    };
    while found.is_none() && !shop.meter.exhausted() {
        shop.run_pair(s1, s2, &provenance, &mut |c| {
            found = Some(c);
            false
        })?;
    }
    Ok(found)
}

/// Runs a composing cycle. Each worker gets its own stream of the seeded
/// generator and an equal share of the attempt budget. Results are merged in
/// worker order and duplicate positions (by FEN) dropped, so a fixed seed
/// and worker count give the same output every time.
pub fn compose_cycle(
    sources: &Sources,
    config: &ComposerConfig,
    budget: CycleBudget,
    workers: usize,
) -> Result<CycleResult, ComposerError> {
    config.validate()?;
    check_sources(sources, config.strategy)?;
    let workers = workers.max(1);
    let started = Instant::now();
    let deadline = budget.duration.map(|d| started + d);
    let share = |w: usize| {
        budget.attempts.map(|n| {
            let base = n / workers as u64;
            base + u64::from((w as u64) < n % workers as u64)
        })
    };
    let results: Vec<Result<(Vec<Composition>, CycleStats), ComposerError>> = if workers == 1 {
        vec![run_worker(sources, config, Meter::new(share(0), deadline), 0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let meter = Meter::new(share(w), deadline);
                    scope.spawn(move || run_worker(sources, config, meter, w as u64))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut seen = HashSet::new();
    let mut stats = CycleStats::default();
    let mut compositions = Vec::new();
    for r in results {
        let (list, s) = r?;
        stats.attempts += s.attempts;
        stats.solver_calls += s.solver_calls;
        stats.pairs += s.pairs;
        for c in list {
            if seen.insert(c.fen()) {
                compositions.push(c);
            }
        }
    }
    stats.emitted = compositions.len() as u64;
    stats.elapsed = started.elapsed();
    Ok(CycleResult { compositions, stats })
}

fn run_worker(
    sources: &Sources,
    config: &ComposerConfig,
    mut meter: Meter,
    stream: u64,
) -> Result<(Vec<Composition>, CycleStats), ComposerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut out: Vec<Composition> = Vec::new();
    let mut seen = HashSet::new();
    let mut pairs = 0;
    let base = Provenance {
        strategy: config.strategy,
        source_ids: Vec::new(),
        strings: None,
        seed: config.seed,
        conventions: config.conventions.clone(),
        strict_duals: config.strict_duals,
    };
    let open = Constraints::open();
    while !meter.exhausted() {
        pairs += 1;
        let mut emit = |c: Composition| {
            if seen.insert(c.fen()) {
                out.push(c);
            }
            true
        };
        match config.strategy {
            StrategyKind::Dsns => {
                let sample = sources.sample.expect("checked");
                let (first, second, ids) = match draw_pair(sample, sources.foreign, config, &mut rng) {
                    Ok(p) => p,
                    Err(DsnsError::NoSurvivingAttributes) => {
                        meter.spend();
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let provenance = Provenance {
                    source_ids: ids,
                    strings: Some((first.clone(), second.clone())),
                    ..base.clone()
                };
                let mut shop = Workshop {
                    config,
                    rng: &mut rng,
                    meter: &mut meter,
                    table: None,
                };
                shop.run_pair(&first, &second, &provenance, &mut emit)?;
            }
            StrategyKind::Random | StrategyKind::ExperienceTable => {
                let mut shop = Workshop {
                    config,
                    rng: &mut rng,
                    meter: &mut meter,
                    table: if config.strategy == StrategyKind::ExperienceTable { sources.table } else { None },
                };
                let supply = shop.random_supply();
                let exact = |i: usize| (supply[i].len() as u32 + 1, supply[i].len() as u32 + 1);
                let plan = Plan {
                    supply,
                    ready: [exact(0), exact(1)],
                    constraints: &open,
                    provenance: &base,
                };
                if let super::placement::Outcome::Composed(c) = shop.run(plan) {
                    emit(*c);
                }
            }
        }
    }
    let stats = CycleStats {
        attempts: meter.attempts,
        solver_calls: meter.solver_calls,
        pairs,
        emitted: out.len() as u64,
        elapsed: Duration::ZERO,
    };
    Ok((out, stats))
}

/// A target deviation from two drawn strings (merged across domains when
/// foreign samples are given), then a searched pair matching it.
fn draw_pair(
    sample: &Sample,
    foreign: &[&Sample],
    config: &ComposerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(DsnsString, DsnsString, Vec<String>), DsnsError> {
    let mut ids = Vec::new();
    let mut deviations = Vec::new();
    for s in std::iter::once(sample).chain(foreign.iter().copied()) {
        let (a, b) = random_pair(s, rng);
        ids.push(a.object_id.clone());
        ids.push(b.object_id.clone());
        deviations.push(deviation_at(a, b, config.precision)?);
    }
    let search = if foreign.is_empty() {
        search_pair_with(sample, deviations[0], &config.search, rng, |_| {})?
    } else {
        search_merged(sample, deviations, &config.search, rng)?.search
    };
    Ok((search.first, search.second, ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::{material_difference, sparsity, Color};
    use crate::composer::Convention;
    use crate::corpus::chess_sample;
    use crate::solver::{find_keys, SolveLimits};

    fn config(strategy: StrategyKind, seed: u64) -> ComposerConfig {
        ComposerConfig {
            strategy,
            conventions: vec![Convention::NoCheckKey],
            seed,
            ..Default::default()
        }
    }

    fn fens(r: &CycleResult) -> Vec<String> {
        r.compositions.iter().map(Composition::fen).collect()
    }

    #[test]
    fn zero_duration_does_nothing() {
        let r = compose_cycle(&Sources::default(), &config(StrategyKind::Random, 1), CycleBudget::duration(Duration::ZERO), 1)
            .unwrap();
        assert!(r.compositions.is_empty());
        assert_eq!(r.stats.attempts, 0);
        assert_eq!(r.stats.cph(), 0.0);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = config(StrategyKind::Random, 7);
        let a = compose_cycle(&Sources::default(), &c, CycleBudget::attempts(400), 1).unwrap();
        let b = compose_cycle(&Sources::default(), &c, CycleBudget::attempts(400), 1).unwrap();
        assert_eq!(fens(&a), fens(&b));
        assert_eq!(a.stats.attempts, 400);
        let two = compose_cycle(&Sources::default(), &c, CycleBudget::attempts(400), 2).unwrap();
        let again = compose_cycle(&Sources::default(), &c, CycleBudget::attempts(400), 2).unwrap();
        assert_eq!(fens(&two), fens(&again));
        assert_eq!(two.stats.attempts, 400);
    }

    #[test]
    fn random_emissions_revalidate() {
        let r = compose_cycle(&Sources::default(), &config(StrategyKind::Random, 11), CycleBudget::attempts(1500), 1)
            .unwrap();
        assert!(!r.compositions.is_empty());
        for c in &r.compositions {
            let report = find_keys(&c.position, SolveLimits::nodes(10_000_000)).unwrap();
            assert_eq!(report.shortest_mate_depth(), Some(3), "{}", c.fen());
            assert!(!report.keys[0].check, "{}", c.fen());
            assert!(c.solution.verify());
        }
        let hours = r.stats.elapsed.as_secs_f64() / 3600.0;
        assert_eq!(r.stats.cph(), r.stats.emitted as f64 / hours);
    }

    #[test]
    fn missing_sources_are_reported() {
        for s in [StrategyKind::Dsns, StrategyKind::ExperienceTable] {
            assert!(matches!(
                compose_cycle(&Sources::default(), &config(s, 1), CycleBudget::attempts(10), 1),
                Err(ComposerError::MissingSource(..))
            ));
        }
    }

    #[test]
    fn compose_one_respects_the_pair() {
        let sample = chess_sample().unwrap();
        let (s1, s2) = (&sample.strings()[0], &sample.strings()[2]);
        let c = compose_one(s1, s2, &config(StrategyKind::Dsns, 5)).unwrap().expect("a composition");
        // Limits recomputed straight from the two rows.
        let v = |i: usize| (s1.values()[i].unwrap(), s2.values()[i].unwrap());
        for (i, color) in [(0, Color::White), (1, Color::Black)] {
            let (a, b) = v(i);
            let n = c.position.piece_count(color) as f64;
            assert!(n >= a.min(b) && n <= a.max(b), "{}", c.fen());
        }
        let (d1, d2) = v(4);
        assert!(material_difference(&c.position) as f64 <= d1.max(d2));
        let (p1, p2) = v(9);
        if p1 + p2 >= 1.0 {
            assert!(sparsity(&c.position) >= 0.25);
        } else {
            assert!(sparsity(&c.position) <= 0.75);
        }
        assert_eq!(c.provenance.source_ids, vec!["c1".to_string(), "c3".to_string()]);
    }
}
