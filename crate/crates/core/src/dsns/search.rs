use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::deviation::{deviation_at, merge_deviations, Deviation};
use super::{DsnsError, DsnsString, Sample};

/// How long one search stage may run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageBudget {
    Iterations(u64),
    Time(Duration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBudget {
    pub stage1: StageBudget,
    pub stage2: StageBudget,
    /// Step between candidate values when stage 2 draws from an attribute's
    /// `[min, max]` range.
    pub granularity: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            stage1: StageBudget::Iterations(200_000),
            stage2: StageBudget::Iterations(200_000),
            granularity: 0.1,
        }
    }
}

impl SearchBudget {
    pub fn iterations(n: u64) -> Self {
        SearchBudget {
            stage1: StageBudget::Iterations(n),
            stage2: StageBudget::Iterations(n),
            ..Default::default()
        }
    }

    /// Wall-clock budget per stage, 30 seconds each unless changed.
    pub fn timed(per_stage: Duration) -> Self {
        SearchBudget {
            stage1: StageBudget::Time(per_stage),
            stage2: StageBudget::Time(per_stage),
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), DsnsError> {
        let positive = |b: StageBudget| match b {
            StageBudget::Iterations(n) => n > 0,
            StageBudget::Time(d) => !d.is_zero(),
        };
        if !positive(self.stage1) || !positive(self.stage2) || self.granularity.is_nan() || self.granularity <= 0.0 {
            return Err(DsnsError::InvalidBudget);
        }
        Ok(())
    }
}

/// Which stage produced the result: 1 or 2 for an exact match at the
/// target's precision, 3 for the closest pair seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Pool = 1,
    Range = 2,
    Closest = 3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub first: DsnsString,
    pub second: DsnsString,
    pub achieved: Deviation,
    pub stage: Stage,
    pub candidates: u64,
}

/// Gap to the target, both candidates and their deviation.
type Closest = (f64, Vec<Option<f64>>, Vec<Option<f64>>, f64);

/// Looks for two new strings whose deviation matches `target`.
///
/// Stage 1 draws every attribute of both strings from the values observed
/// in the sample. Stage 2 draws from each attribute's observed range on a
/// grid of `budget.granularity`. If neither stage hits the target at its
/// precision, the closest pair examined is returned.
pub fn search_pair(
    sample: &Sample,
    target: Deviation,
    budget: &SearchBudget,
    seed: u64,
) -> Result<SearchOutcome, DsnsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    search_pair_with(sample, target, budget, &mut rng, |_| {})
}

/// As [`search_pair`], drawing from a caller-owned generator and reporting
/// each candidate's deviation to `observe`.
pub fn search_pair_with<R: Rng>(
    sample: &Sample,
    target: Deviation,
    budget: &SearchBudget,
    rng: &mut R,
    mut observe: impl FnMut(&Candidate),
) -> Result<SearchOutcome, DsnsError> {
    budget.validate()?;
    if (0..sample.schema().len()).all(|i| sample.pool(i).is_empty()) {
        return Err(DsnsError::EmptyPool);
    }
    let grids: Vec<Option<Grid>> = (0..sample.schema().len())
        .map(|i| {
            sample.range(i).map(|(lo, hi)| Grid {
                lo,
                hi,
                steps: ((hi - lo) / budget.granularity + 1e-9).floor() as u64,
            })
        })
        .collect();

    let mut best: Option<Closest> = None;
    let mut candidates = 0u64;
    let mut a = vec![None; sample.schema().len()];
    let mut b = vec![None; sample.schema().len()];

    for stage in [Stage::Pool, Stage::Range] {
        let limit = if stage == Stage::Pool { budget.stage1 } else { budget.stage2 };
        let started = Instant::now();
        let mut iterations = 0u64;
        loop {
            let done = match limit {
                StageBudget::Iterations(n) => iterations >= n,
                StageBudget::Time(d) => iterations.is_multiple_of(256) && started.elapsed() >= d,
            };
            if done {
                break;
            }
            iterations += 1;
            for i in 0..a.len() {
                match stage {
                    Stage::Pool => {
                        a[i] = sample.pool(i).choose(rng).copied();
                        b[i] = sample.pool(i).choose(rng).copied();
                    }
                    _ => {
                        a[i] = grids[i].map(|g| grid_value(g, budget.granularity, rng));
                        b[i] = grids[i].map(|g| grid_value(g, budget.granularity, rng));
                    }
                }
            }
            let Some(value) = pair_deviation(&a, &b) else { continue };
            candidates += 1;
            observe(&Candidate {
                stage,
                first: &a,
                second: &b,
                deviation: value,
            });
            let gap = (value - target.value).abs();
            if best.as_ref().is_none_or(|bst| gap < bst.0) {
                best = Some((gap, a.clone(), b.clone(), value));
            }
            if target.matches(value) {
                return finish(sample, target, a, b, value, stage, candidates);
            }
        }
    }
    let Some((_, a, b, value)) = best else {
        return Err(DsnsError::NoSurvivingAttributes);
    };
    finish(sample, target, a, b, value, Stage::Closest, candidates)
}

/// One generated pair, as seen by the observer of [`search_pair_with`].
#[derive(Debug)]
pub struct Candidate<'a> {
    pub stage: Stage,
    pub first: &'a [Option<f64>],
    pub second: &'a [Option<f64>],
    pub deviation: f64,
}

#[derive(Clone, Copy)]
struct Grid {
    lo: f64,
    hi: f64,
    steps: u64,
}

fn grid_value<R: Rng>(g: Grid, granularity: f64, rng: &mut R) -> f64 {
    let k = rng.gen_range(0..=g.steps);
    // Trim float drift such as 0.30000000000000004 without leaving the range.
    let v = super::deviation::round_to(g.lo + k as f64 * granularity, 9);
    v.clamp(g.lo, g.hi)
}

fn pair_deviation(a: &[Option<f64>], b: &[Option<f64>]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = a
        .iter()
        .zip(b)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .collect();
    (!pairs.is_empty()).then(|| super::deviation::deviation_of_pairs(&pairs))
}

fn finish(
    sample: &Sample,
    target: Deviation,
    a: Vec<Option<f64>>,
    b: Vec<Option<f64>>,
    value: f64,
    stage: Stage,
    candidates: u64,
) -> Result<SearchOutcome, DsnsError> {
    let schema = sample.schema().clone();
    let first = DsnsString::new(format!("{}:new-1", sample.domain), schema.clone(), a)?;
    let second = DsnsString::new(format!("{}:new-2", sample.domain), schema, b)?;
    let attributes = first
        .values()
        .iter()
        .zip(second.values())
        .filter(|(x, y)| x.is_some() && y.is_some())
        .count();
    Ok(SearchOutcome {
        first,
        second,
        achieved: Deviation {
            value,
            precision: target.precision,
            attributes,
        },
        stage,
        candidates,
    })
}

/// Two strings picked at random from a sample: distinct when the sample
/// has at least two.
pub fn random_pair<'a, R: Rng>(sample: &'a Sample, rng: &mut R) -> (&'a DsnsString, &'a DsnsString) {
    let n = sample.len();
    let i = rng.gen_range(0..n);
    if n == 1 {
        return (&sample.strings()[0], &sample.strings()[0]);
    }
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (&sample.strings()[i], &sample.strings()[j])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossDomainOutcome {
    /// Deviation of the pair drawn from each sample, target domain first.
    pub deviations: Vec<Deviation>,
    pub merged: Deviation,
    pub search: SearchOutcome,
}

/// Draws a pair from the target sample and from each foreign sample, merges
/// their deviations (the target domain on top, later domains merged first),
/// then searches the target sample for a pair matching the merged value.
///
/// With one foreign sample this is the two-domain case; more samples chain
/// the merge: `target <- (f1 <- (f2 <- ...))`.
pub fn cross_domain_pair(
    target_sample: &Sample,
    foreign: &[&Sample],
    budget: &SearchBudget,
    precision: u8,
    seed: u64,
) -> Result<CrossDomainOutcome, DsnsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cross_domain_pair_with(target_sample, foreign, budget, precision, &mut rng)
}

pub fn cross_domain_pair_with<R: Rng>(
    target_sample: &Sample,
    foreign: &[&Sample],
    budget: &SearchBudget,
    precision: u8,
    rng: &mut R,
) -> Result<CrossDomainOutcome, DsnsError> {
    let mut deviations = Vec::with_capacity(foreign.len() + 1);
    for sample in std::iter::once(target_sample).chain(foreign.iter().copied()) {
        let (a, b) = random_pair(sample, rng);
        deviations.push(deviation_at(a, b, precision)?);
    }
    search_merged(target_sample, deviations, budget, rng)
}

/// The search half of [`cross_domain_pair`], for callers that already hold
/// the per-domain deviations (target domain first).
pub fn search_merged<R: Rng>(
    target_sample: &Sample,
    deviations: Vec<Deviation>,
    budget: &SearchBudget,
    rng: &mut R,
) -> Result<CrossDomainOutcome, DsnsError> {
    let merged = merge_chain(&deviations);
    let search = search_pair_with(target_sample, merged, budget, rng, |_| {})?;
    Ok(CrossDomainOutcome {
        deviations,
        merged,
        search,
    })
}

/// Folds a list of deviations from the last one back to the first, each
/// earlier deviation going on top.
pub fn merge_chain(deviations: &[Deviation]) -> Deviation {
    let (last, rest) = deviations.split_last().expect("at least one deviation");
    rest.iter().rev().fold(*last, |acc, top| merge_deviations(*top, acc))
}
