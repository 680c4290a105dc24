use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dsns_bench::{corpus_positions, kiwipete};
use dsns_core::chess::{perft, Position};
use dsns_core::composer::{compose_cycle, ComposerConfig, Convention, CycleBudget, Sources, StrategyKind};
use dsns_core::corpus::chess_sample;
use dsns_core::dsns::{deviation, search_pair, Deviation, SearchBudget};
use dsns_core::solver::{find_keys, SolveLimits};

fn bench_perft(c: &mut Criterion) {
    let start = Position::initial();
    let kiwi = kiwipete();
    let mut g = c.benchmark_group("perft");
    g.bench_function("initial_d4", |b| b.iter(|| perft(black_box(&start), 4)));
    g.bench_function("kiwipete_d3", |b| b.iter(|| perft(black_box(&kiwi), 3)));
    g.finish();
}

fn bench_solver(c: &mut Criterion) {
    let positions = corpus_positions(10);
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    g.bench_function("find_keys_corpus_10", |b| {
        b.iter(|| {
            for p in &positions {
                black_box(find_keys(p, SolveLimits::exhaustive()).expect("no limit"));
            }
        })
    });
    g.finish();
}

fn bench_deviation(c: &mut Criterion) {
    let sample = chess_sample().expect("bundled sample");
    let (a, b) = (&sample.strings()[0], &sample.strings()[1]);
    c.bench_function("deviation_pair", |bch| bch.iter(|| deviation(black_box(a), black_box(b))));
    let mut g = c.benchmark_group("search");
    g.sample_size(20);
    let target = Deviation::new(7.27, 2);
    let budget = SearchBudget::iterations(2_000);
    g.bench_function("search_pair_2k", |bch| bch.iter(|| search_pair(&sample, target, &budget, 7)));
    g.finish();
}

fn bench_compose(c: &mut Criterion) {
    let sample = chess_sample().expect("bundled sample");
    let mut g = c.benchmark_group("compose");
    g.sample_size(10);
    for strategy in [StrategyKind::Random, StrategyKind::Dsns] {
        let config = ComposerConfig {
            strategy,
            conventions: vec![Convention::NoCheckKey],
            seed: 1,
            ..Default::default()
        };
        let sources = Sources {
            sample: Some(&sample),
            ..Default::default()
        };
        g.bench_function(format!("{strategy}_200_attempts"), |b| {
            b.iter(|| compose_cycle(&sources, &config, CycleBudget::attempts(200), 1).expect("valid config"))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_perft, bench_solver, bench_deviation, bench_compose);
criterion_main!(benches);
