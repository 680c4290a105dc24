use super::{compose_cycle, ComposerConfig, ComposerError, Convention, CycleBudget, CycleStats, Sources, StrategyKind};

/// One row of the strategy x convention matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub strategy: StrategyKind,
    pub conventions: Vec<Convention>,
    pub cycles: u32,
    pub attempts: u64,
    pub emitted: u64,
    pub cph_mean: f64,
    /// Means over every composition emitted in the cell's cycles; `None`
    /// when nothing was emitted.
    pub mean_pieces: Option<f64>,
    pub mean_variations: Option<f64>,
    pub mean_duals: Option<f64>,
    pub mean_sparsity: Option<f64>,
    /// Statistics of each cycle, in seed order.
    pub per_cycle: Vec<CycleStats>,
}

/// Runs `cycles` cycles for every strategy and convention set. Cycle `i`
/// uses seed `base.seed + i`, so strategies are compared on the same seeds.
pub fn bench_matrix(
    sources: &Sources,
    base: &ComposerConfig,
    strategies: &[StrategyKind],
    convention_sets: &[Vec<Convention>],
    cycles: u32,
    budget: CycleBudget,
    workers: usize,
) -> Result<Vec<BenchCell>, ComposerError> {
    if strategies.is_empty() {
        return Err(ComposerError::InvalidConfig("at least one strategy is needed"));
    }
    let sets: Vec<Vec<Convention>> = if convention_sets.is_empty() {
        vec![Vec::new()]
    } else {
        convention_sets.to_vec()
    };
    let mut cells = Vec::new();
    for &strategy in strategies {
        for conventions in &sets {
            let mut cell = BenchCell {
                strategy,
                conventions: conventions.clone(),
                cycles,
                attempts: 0,
                emitted: 0,
                cph_mean: 0.0,
                mean_pieces: None,
                mean_variations: None,
                mean_duals: None,
                mean_sparsity: None,
                per_cycle: Vec::new(),
            };
            let mut sums = [0.0f64; 4];
            let mut cph_total = 0.0;
            for i in 0..cycles {
                let config = ComposerConfig {
                    strategy,
                    conventions: conventions.clone(),
                    seed: base.seed.wrapping_add(i as u64),
                    ..base.clone()
                };
                let result = compose_cycle(sources, &config, budget, workers)?;
                cell.attempts += result.stats.attempts;
                cell.emitted += result.stats.emitted;
                cph_total += result.stats.cph();
                cell.per_cycle.push(result.stats);
                for c in &result.compositions {
                    let m = c.metrics;
                    sums[0] += m.pieces as f64;
                    sums[1] += m.variations as f64;
                    sums[2] += (m.duals.0 + m.duals.1) as f64;
                    sums[3] += m.sparsity;
                }
            }
            if cycles > 0 {
                cell.cph_mean = cph_total / cycles as f64;
            }
            if cell.emitted > 0 {
                let n = cell.emitted as f64;
                cell.mean_pieces = Some(sums[0] / n);
                cell.mean_variations = Some(sums[1] / n);
                cell.mean_duals = Some(sums[2] / n);
                cell.mean_sparsity = Some(sums[3] / n);
            }
            cells.push(cell);
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shape() {
        let base = ComposerConfig {
            seed: 3,
            ..Default::default()
        };
        let sets = vec![Vec::new(), vec![Convention::NoCheckKey]];
        let cells = bench_matrix(
            &Sources::default(),
            &base,
            &[StrategyKind::Random],
            &sets,
            2,
            CycleBudget::attempts(50),
            1,
        )
        .unwrap();
        assert_eq!(cells.len(), 2);
        for c in &cells {
            assert_eq!(c.per_cycle.len(), 2);
            assert_eq!(c.attempts, 100);
            assert_eq!(c.emitted, c.per_cycle.iter().map(|s| s.emitted).sum::<u64>());
            assert_eq!(c.mean_pieces.is_some(), c.emitted > 0);
        }
        assert!(bench_matrix(&Sources::default(), &base, &[], &sets, 1, CycleBudget::attempts(1), 1).is_err());
    }
}
