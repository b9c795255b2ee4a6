//! Seeded Monte-Carlo replication for populations too large to enumerate.
//!
//! Replicate `r` draws its sample from the child seed `child_seed(seed, r)`,
//! and every requested estimator is evaluated on that same sample. Values are
//! stored by replicate index and reduced serially afterwards, so reports do
//! not depend on how many worker threads ran the replicates.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{Design, EstimatorKind};
use crate::population::{check_design, draw_indices, Population, TransformConfig};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, PartialEq)]
pub struct MCReport {
    pub estimator: EstimatorKind,
    pub reps: usize,
    pub seed: u64,
    pub mean: f64,
    /// Sample variance over successful replicates (`reps - 1` denominator).
    pub variance: f64,
    pub std_error_of_mean: f64,
    pub failed_reps: usize,
}

/// SplitMix64 finalizer applied to `seed + (r + 1) · γ`.
pub fn child_seed(seed: u64, replicate: u64) -> u64 {
    let mut z = seed.wrapping_add(
        replicate
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn simulate(
    pop: &Population,
    n: usize,
    kinds: &[EstimatorKind],
    config: Option<TransformConfig>,
    reps: usize,
    seed: u64,
) -> Result<Vec<MCReport>> {
    simulate_with_workers(pop, n, kinds, config, reps, seed, None)
}

/// [`simulate`] on a dedicated pool of `workers` threads (`None` uses the
/// global pool).
pub fn simulate_with_workers(
    pop: &Population,
    n: usize,
    kinds: &[EstimatorKind],
    config: Option<TransformConfig>,
    reps: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<MCReport>> {
    check_design(pop.len(), n)?;
    if reps < 2 {
        return Err(Error::InvalidDesign(format!(
            "reps = {reps} must be at least 2"
        )));
    }
    if let Some(k) = kinds
        .iter()
        .find(|k| k.requires_transform() && config.is_none())
    {
        return Err(Error::MissingTransform(k.code()));
    }
    let design = Design::new(pop, n, config)?;
    let width = kinds.len();
    let mut values = vec![f64::NAN; reps * width];

    let fill = |values: &mut [f64]| {
        values
            .par_chunks_mut(width.max(1))
            .enumerate()
            .for_each(|(r, row)| {
                let stats = draw_indices(pop.len(), n, child_seed(seed, r as u64))
                    .and_then(|s| design.stats(&s));
                if let Ok(stats) = stats {
                    for (slot, &kind) in row.iter_mut().zip(kinds) {
                        if let Ok(v) = crate::estimators::estimate(kind, &stats, design.constants())
                        {
                            *slot = v;
                        }
                    }
                }
            })
    };
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| fill(&mut values)),
        None => fill(&mut values),
    }

    Ok(kinds
        .iter()
        .enumerate()
        .map(|(j, &kind)| {
            let column = || {
                values
                    .iter()
                    .skip(j)
                    .step_by(width)
                    .copied()
                    .filter(|v| !v.is_nan())
            };
            let ok = column().count();
            let mean = column().collect::<NeumaierSum>().total() / ok as f64;
            let variance = column()
                .map(|v| (v - mean).powi(2))
                .collect::<NeumaierSum>()
                .total()
                / (ok as f64 - 1.0);
            MCReport {
                estimator: kind,
                reps,
                seed,
                mean,
                variance,
                std_error_of_mean: (variance / ok as f64).sqrt(),
                failed_reps: reps - ok,
            }
        })
        .collect())
}
