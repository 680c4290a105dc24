//! Property bodies shared by the proptest suites and the acceptance run.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dsns_core::dsns::{deviation, merge_deviations, merge_digits, search_pair_with, Deviation, DsnsString, Sample, SearchBudget, Stage};

pub const CASES: u32 = 10_000;

type Checked = Result<(), TestCaseError>;

fn schema(n: usize) -> Arc<[String]> {
    (0..n).map(|i| format!("a{i}")).collect()
}

pub fn string(id: &str, values: &[Option<f64>]) -> DsnsString {
    DsnsString::new(id, schema(values.len()), values.to_vec()).unwrap()
}

pub fn present(v: &[f64]) -> Vec<Option<f64>> {
    v.iter().map(|x| Some(*x)).collect()
}

pub fn positive_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=10).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..5000.0, n),
            prop::collection::vec(0.01f64..5000.0, n),
        )
    })
}

/// Digit walk written out independently of the library: align the two
/// decimal strings on the point, then go place by place.
pub fn merge_oracle(top: &str, bottom: &str) -> String {
    let place_digits = |s: &str| -> Vec<(i32, u8)> {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let mut out = Vec::new();
        for (i, c) in int.bytes().enumerate() {
            out.push((int.len() as i32 - 1 - i as i32, c - b'0'));
        }
        for (i, c) in frac.bytes().enumerate() {
            out.push((-(i as i32) - 1, c - b'0'));
        }
        out
    };
    let below = place_digits(bottom);
    let mut out = String::new();
    for (place, t) in place_digits(top) {
        if place == -1 {
            out.push('.');
        }
        let b = below.iter().find(|(p, _)| *p == place).map(|x| x.1);
        let d = match b {
            Some(b) if b != 0 && t % b == 0 => b,
            _ => t,
        };
        out.push((b'0' + d) as char);
    }
    out
}

pub fn symmetric((a, b): (Vec<f64>, Vec<f64>)) -> Checked {
    let (x, y) = (string("x", &present(&a)), string("y", &present(&b)));
    prop_assert_eq!(deviation(&x, &y).unwrap().value, deviation(&y, &x).unwrap().value);
    Ok(())
}

pub fn non_negative((a, b): (Vec<f64>, Vec<f64>)) -> Checked {
    let d = deviation(&string("x", &present(&a)), &string("y", &present(&b))).unwrap();
    prop_assert!(d.value >= -1e-9, "{}", d.value);
    Ok(())
}

pub fn self_zero((a, _): (Vec<f64>, Vec<f64>)) -> Checked {
    let x = string("x", &present(&a));
    prop_assert!(deviation(&x, &x).unwrap().value.abs() < 1e-9);
    Ok(())
}

pub fn null_input() -> impl Strategy<Value = ((Vec<f64>, Vec<f64>), Vec<u8>)> {
    (positive_pair(), prop::collection::vec(0u8..3, 10))
}

/// Mask 0: both present, 1: first NULL, 2: second NULL.
pub fn null_reduction(((a, b), mask): ((Vec<f64>, Vec<f64>), Vec<u8>)) -> Checked {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut kept = (Vec::new(), Vec::new());
    for (i, (&p, &q)) in a.iter().zip(&b).enumerate() {
        match mask[i] {
            0 => {
                x.push(Some(p));
                y.push(Some(q));
                kept.0.push(p);
                kept.1.push(q);
            }
            1 => {
                x.push(None);
                y.push(Some(q));
            }
            _ => {
                x.push(Some(p));
                y.push(None);
            }
        }
    }
    let full = deviation(&string("x", &x), &string("y", &y));
    if kept.0.is_empty() {
        prop_assert!(full.is_err());
    } else {
        let reduced = deviation(&string("x", &present(&kept.0)), &string("y", &present(&kept.1))).unwrap();
        let full = full.unwrap();
        prop_assert_eq!(full.value, reduced.value);
        prop_assert_eq!(full.attributes, kept.0.len());
    }
    Ok(())
}

pub fn merge_input() -> impl Strategy<Value = (f64, f64, u8)> {
    (0.0f64..1e7, 0.0f64..1e7, 0u8..4)
}

pub fn merge_shape((t, o, places): (f64, f64, u8)) -> Checked {
    let merged = merge_deviations(Deviation::new(t, places), Deviation::new(o, places));
    let top = format!("{:.*}", places as usize, t);
    let bottom = format!("{:.*}", places as usize, o);
    prop_assert_eq!(merged.render().len(), top.len());
    prop_assert_eq!(merged.render(), merge_oracle(&top, &bottom));
    prop_assert_eq!(merge_digits(&top, &bottom), merge_oracle(&top, &bottom));
    Ok(())
}

pub fn merge_idempotent((t, _, places): (f64, f64, u8)) -> Checked {
    let x = Deviation::new(t, places);
    prop_assert_eq!(merge_deviations(x, x).render(), x.render());
    Ok(())
}

pub fn small_sample() -> impl Strategy<Value = Vec<Vec<Option<f64>>>> {
    (2usize..6, 1usize..5).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(
            prop::collection::vec(prop::option::weighted(0.8, (0u32..200).prop_map(|v| v as f64 / 4.0)), cols),
            rows,
        )
    })
}

pub fn search_input() -> impl Strategy<Value = (Vec<Vec<Option<f64>>>, u64, f64)> {
    (small_sample(), any::<u64>(), -20.0f64..80.0)
}

fn sample_of(rows: &[Vec<Option<f64>>]) -> Option<Sample> {
    let names: Vec<String> = (0..rows[0].len()).map(|i| format!("a{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Sample::from_rows("t", &names, rows.iter().enumerate().map(|(i, r)| (i.to_string(), r.clone())).collect()).ok()
}

pub fn pool_membership((rows, seed, target): (Vec<Vec<Option<f64>>>, u64, f64)) -> Checked {
    let Some(sample) = sample_of(&rows) else { return Ok(()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside = Vec::new();
    let _ = search_pair_with(&sample, Deviation::new(target, 2), &SearchBudget::iterations(20), &mut rng, |c| {
        if c.stage == Stage::Pool {
            for (i, v) in c.first.iter().chain(c.second.iter()).enumerate() {
                let col = i % rows[0].len();
                let pool: Vec<f64> = rows.iter().filter_map(|r| r[col]).collect();
                match v {
                    Some(v) if !pool.contains(v) => outside.push(*v),
                    None if !pool.is_empty() => outside.push(f64::NAN),
                    _ => {}
                }
            }
        }
    });
    prop_assert!(outside.is_empty(), "{:?}", outside);
    Ok(())
}

pub fn running_minimum((rows, seed, target): (Vec<Vec<Option<f64>>>, u64, f64)) -> Checked {
    let Some(sample) = sample_of(&rows) else { return Ok(()) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = Vec::new();
    let Ok(out) = search_pair_with(&sample, Deviation::new(target, 2), &SearchBudget::iterations(15), &mut rng, |c| {
        seen.push(c.deviation)
    }) else {
        return Ok(());
    };
    prop_assert_eq!(seen.len() as u64, out.candidates);
    let best = seen.iter().map(|d| (d - target).abs()).fold(f64::INFINITY, f64::min);
    match out.stage {
        Stage::Closest => {
            prop_assert_eq!((out.achieved.value - target).abs(), best);
            prop_assert!(seen.iter().all(|&d| !Deviation::new(target, 2).matches(d)));
        }
        _ => {
            prop_assert_eq!(out.achieved.value, *seen.last().unwrap());
            prop_assert!(Deviation::new(target, 2).matches(out.achieved.value));
        }
    }
    let direct = deviation(&out.first, &out.second).unwrap();
    prop_assert!((direct.value - out.achieved.value).abs() < 1e-9);
    Ok(())
}
