//! One line per acceptance criterion. Run with
//! `cargo test -p dsns-core --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use proptest::test_runner::{Config, TestRunner};

use dsns_core::attributes::{
    audio_measures, chess_attributes, image_attributes, ChessSequence, PcmAudio, RasterImage, IMAGE_SCHEMA,
};
use dsns_core::chess::{parse_fen, perft, Position};
use dsns_core::composer::{
    bench_matrix, build_experience_table, compose_cycle, ComposerConfig, Convention, CycleBudget, Sources,
    StrategyKind,
};
use dsns_core::corpus::{chess_sample, load_corpus};
use dsns_core::dsns::{deviation, merge_deviations, round_to, summative_division, Deviation, DsnsString};
use dsns_core::solver::{find_keys, SolveLimits};

use common::props::{self, merge_oracle, present, string, CASES};
use common::validity::validate;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn deviation_table() -> Verdict {
    let (a, b) = ([6.0, 5.0, 13.0], [7.0, 7.0, 9.0]);
    let d = deviation(&string("a", &present(&a)), &string("b", &present(&b))).map_err(|e| e.to_string())?;
    ensure((d.value - 7.275).abs() <= 1e-9, format!("deviation {}", d.value))?;
    let terms: Vec<f64> = a.iter().zip(&b).map(|(x, y)| round_to(summative_division(*x, *y), 3)).collect();
    ensure(terms == [2.024, 2.114, 2.137], format!("summative divisions {terms:?}"))?;
    Ok(format!("deviation = {}, divisions {terms:?}", d.value))
}

fn merge_rule() -> Verdict {
    let forward = merge_deviations(Deviation::new(126.21, 2), Deviation::new(35722.11, 2)).render();
    let reverse = merge_deviations(Deviation::new(35722.11, 2), Deviation::new(126.21, 2)).render();
    ensure(forward == "122.11", format!("forward {forward}"))?;
    ensure(reverse == "35122.11", format!("reverse {reverse}"))?;
    ensure(merge_oracle("126.21", "35722.11") == forward && merge_oracle("35722.11", "126.21") == reverse, "oracle disagrees")?;
    Ok(format!("{forward} / {reverse}"))
}

const DOUBLE_SOLUTIONS: [u32; 10] = [3, 7, 15, 21, 39, 50, 67, 82, 87, 90];

fn solver_regression() -> Verdict {
    let mut slowest = 0.0f64;
    for e in load_corpus().map_err(|e| e.to_string())? {
        let t = Instant::now();
        let r = find_keys(&e.position, SolveLimits::nodes(10_000_000)).map_err(|err| format!("#{}: {err}", e.index))?;
        slowest = slowest.max(t.elapsed().as_secs_f64());
        ensure(!r.keys.is_empty(), format!("#{} has no key", e.index))?;
        if DOUBLE_SOLUTIONS.contains(&e.index) {
            ensure(r.keys.len() >= 2, format!("#{} has {} key", e.index, r.keys.len()))?;
        }
    }
    ensure(slowest <= 5.0, format!("slowest position took {slowest:.2}s"))?;
    Ok(format!("90 positions solved, 10 double solutions found, slowest {slowest:.3}s"))
}

fn perft_oracle() -> Verdict {
    let start = Position::initial();
    let counts: Vec<u64> = (1..=3).map(|d| perft(&start, d)).collect();
    ensure(counts == [20, 400, 8902], format!("{counts:?}"))?;
    Ok(format!("{counts:?}"))
}

fn composer_end_to_end() -> Verdict {
    let sample = chess_sample().map_err(|e| e.to_string())?;
    ensure(sample.len() >= 20, "fixture too small")?;
    let config = ComposerConfig {
        strategy: StrategyKind::Dsns,
        conventions: vec![Convention::NoCheckKey],
        seed: 2016,
        ..Default::default()
    };
    let sources = Sources {
        sample: Some(&sample),
        ..Default::default()
    };
    let r = compose_cycle(&sources, &config, CycleBudget::attempts(50_000), 1).map_err(|e| e.to_string())?;
    ensure(!r.compositions.is_empty(), "nothing emitted")?;
    for c in &r.compositions {
        ensure(c.provenance.strings.is_some(), "missing source strings")?;
        validate(c, true)?;
    }
    Ok(format!(
        "{} emitted from {} attempts in {:.1}s, all valid",
        r.compositions.len(),
        r.stats.attempts,
        r.stats.elapsed.as_secs_f64()
    ))
}

fn bench_and_random_validity() -> Verdict {
    let sample = chess_sample().map_err(|e| e.to_string())?;
    let positions: Vec<Position> = load_corpus().map_err(|e| e.to_string())?.into_iter().map(|e| e.position).collect();
    let table = build_experience_table(&positions).map_err(|e| e.to_string())?;
    let sources = Sources {
        sample: Some(&sample),
        table: Some(&table),
        ..Default::default()
    };
    let strategies = [StrategyKind::Dsns, StrategyKind::Random, StrategyKind::ExperienceTable];
    let mut sets: Vec<Vec<Convention>> = vec![Vec::new()];
    sets.extend(Convention::ALL.iter().map(|c| vec![*c]));
    sets.push(Convention::ALL.to_vec());
    let base = ComposerConfig {
        seed: 7,
        ..Default::default()
    };
    let cells = bench_matrix(&sources, &base, &strategies, &sets, 1, CycleBudget::attempts(300), 1)
        .map_err(|e| e.to_string())?;
    ensure(cells.len() == strategies.len() * sets.len(), format!("{} cells", cells.len()))?;
    ensure(cells.iter().all(|c| c.attempts == 300), "a cell ran short")?;

    let config = ComposerConfig {
        strategy: StrategyKind::Random,
        conventions: vec![Convention::NoCheckKey],
        seed: 7,
        ..Default::default()
    };
    let r = compose_cycle(&sources, &config, CycleBudget::attempts(5_000), 1).map_err(|e| e.to_string())?;
    ensure(!r.compositions.is_empty(), "random strategy emitted nothing")?;
    for c in &r.compositions {
        validate(c, true)?;
    }
    Ok(format!(
        "{} cells; {} random emissions, all valid",
        cells.len(),
        r.compositions.len()
    ))
}

fn property_suites() -> Verdict {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new(config);
    macro_rules! suite {
        ($name:expr, $strategy:expr, $check:expr) => {
            runner
                .run(&$strategy, $check)
                .map_err(|e| format!("{}: {}", $name, e))?
        };
    }
    suite!("symmetry", props::positive_pair(), props::symmetric);
    suite!("non-negativity", props::positive_pair(), props::non_negative);
    suite!("self deviation", props::positive_pair(), props::self_zero);
    suite!("null reduction", props::null_input(), props::null_reduction);
    suite!("merge shape", props::merge_input(), props::merge_shape);
    suite!("merge idempotence", props::merge_input(), props::merge_idempotent);
    suite!("pool membership", props::search_input(), props::pool_membership);
    suite!("running minimum", props::search_input(), props::running_minimum);
    Ok(format!("8 suites x {CASES} cases"))
}

fn attribute(s: &DsnsString, name: &str) -> Option<f64> {
    s.get(name).flatten()
}

fn attribute_closed_forms() -> Verdict {
    let flat = RasterImage::new(16, 8, 1, vec![140; 128]).map_err(|e| e.to_string())?;
    let img = image_attributes("flat", &flat);
    ensure(img.schema().len() == IMAGE_SCHEMA.len(), "image schema")?;
    ensure(attribute(&img, "contrast") == Some(0.0), format!("contrast {:?}", attribute(&img, "contrast")))?;
    ensure(attribute(&img, "noisiness") == Some(0.0), format!("noisiness {:?}", attribute(&img, "noisiness")))?;

    // 480 Hz at 48 kHz: whole periods of 100 samples, peaks on samples.
    let amp = i32::MAX as f64;
    let sine: Vec<i32> = (0..48_000).map(|n| (amp * (2.0 * PI * n as f64 / 100.0).sin()).round() as i32).collect();
    let pcm = PcmAudio::new(1, 48_000, 32, sine).map_err(|e| e.to_string())?;
    let crest = audio_measures(&pcm).crest_factor.ok_or("no crest factor")?;
    ensure((crest - 2f64.sqrt()).abs() <= 1e-6, format!("crest {crest}"))?;
    let silent = PcmAudio::new(2, 44_100, 16, vec![0; 8_820]).map_err(|e| e.to_string())?;
    let zcr = audio_measures(&silent).zero_crossing_rate;
    ensure(zcr == 0.0, format!("zero-crossing rate {zcr}"))?;

    for (fen, expected) in [
        ("8/1p2BN1K/4Qp2/n1R4p/3k2P1/P5n1/4P3/1r6 w - - 0 1", [8.0, 7.0, 23.0, 14.0, 9.0]),
        ("5rk1/5qpn/8/3N4/3B4/1B6/1KP3R1/8 w - - 0 1", [6.0, 5.0, 15.0, 18.0, 3.0]),
    ] {
        let seq = ChessSequence::new(parse_fen(fen).map_err(|e| e.to_string())?, Vec::new(), None)
            .map_err(|e| e.to_string())?;
        let head: Vec<f64> = chess_attributes(&seq).values()[..5].iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        ensure(head == expected, format!("{fen}: {head:?}"))?;
    }
    Ok(format!("crest {crest:.9}, zcr 0, flat image 0/0, reference chess rows exact"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("deviation arithmetic", deviation_table),
        ("merge rule", merge_rule),
        ("solver regression", solver_regression),
        ("perft", perft_oracle),
        ("composer end to end", composer_end_to_end),
        ("bench matrix and random validity", bench_and_random_validity),
        ("property suites", property_suites),
        ("attribute closed forms", attribute_closed_forms),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = check();
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
