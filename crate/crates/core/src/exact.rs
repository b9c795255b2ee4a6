//! Exact sampling distributions by enumerating every sample.
//!
//! Under simple random sampling without replacement each of the `C(N, n)`
//! subsets has probability `1 / C(N, n)`, so averaging an estimator over the
//! full enumeration gives its design expectation exactly (up to rounding).

use crate::error::{Error, Result};
use crate::estimators::{sample_suv, Design, EstimatorKind};
use crate::population::{
    binomial, enumerate_samples, Population, TransformConfig, DEFAULT_ENUMERATION_CAP,
};
use crate::sum::{self, NeumaierSum};

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub estimator: EstimatorKind,
    /// One value per successfully evaluated subset, in lexicographic order.
    pub values: Vec<f64>,
    pub mean: f64,
    /// Divides by the number of values: the enumeration is the whole
    /// population of samples.
    pub variance: f64,
    /// `mean - Ȳ`.
    pub bias: f64,
    pub mse: f64,
    pub failed_samples: usize,
}

impl ExactDistribution {
    pub fn total_samples(&self) -> usize {
        self.values.len() + self.failed_samples
    }
}

/// A yes/no verdict with the signed quantity it was decided on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub margin: f64,
}

fn moments(values: &[f64], target: f64) -> (f64, f64, f64) {
    let count = values.len() as f64;
    let mean = sum::mean(values);
    let var = values
        .iter()
        .map(|v| (v - mean).powi(2))
        .collect::<NeumaierSum>()
        .total()
        / count;
    let mse = values
        .iter()
        .map(|v| (v - target).powi(2))
        .collect::<NeumaierSum>()
        .total()
        / count;
    (mean, var, mse)
}

pub fn exact_distribution(
    pop: &Population,
    n: usize,
    kind: EstimatorKind,
    config: Option<TransformConfig>,
) -> Result<ExactDistribution> {
    exact_distribution_capped(pop, n, kind, config, DEFAULT_ENUMERATION_CAP)
}

/// [`exact_distribution`] with an explicit cap on `C(N, n)`.
///
/// Subsets on which the estimator errors are counted in `failed_samples`
/// and left out of the moments.
pub fn exact_distribution_capped(
    pop: &Population,
    n: usize,
    kind: EstimatorKind,
    config: Option<TransformConfig>,
    cap: u128,
) -> Result<ExactDistribution> {
    if kind.requires_transform() && config.is_none() {
        return Err(Error::MissingTransform(kind.code()));
    }
    let subsets = enumerate_samples(pop.len(), n, cap)?;
    let design = Design::new(pop, n, config)?;

    let mut values = Vec::with_capacity(binomial(pop.len(), n) as usize);
    let mut failed_samples = 0;
    for s in subsets {
        match design.estimate(kind, &s) {
            Ok(v) => values.push(v),
            Err(_) => failed_samples += 1,
        }
    }

    let ybar = pop.mean_y();
    let (mean, variance, mse) = moments(&values, ybar);
    Ok(ExactDistribution {
        estimator: kind,
        values,
        mean,
        variance,
        bias: mean - ybar,
        mse,
        failed_samples,
    })
}

/// Checks `|E(estimator) - Ȳ| <= tol · max(1, |Ȳ|)` by full enumeration.
/// The margin is the signed bias.
pub fn verify_unbiased(
    pop: &Population,
    n: usize,
    kind: EstimatorKind,
    config: Option<TransformConfig>,
    tol: f64,
) -> Result<Verdict> {
    let dist = exact_distribution(pop, n, kind, config)?;
    verdict_from(&dist, pop.mean_y(), tol)
}

pub(crate) fn verdict_from(dist: &ExactDistribution, ybar: f64, tol: f64) -> Result<Verdict> {
    if dist.failed_samples > 0 {
        return Err(Error::CensoredDistribution {
            failed: dist.failed_samples,
            total: dist.total_samples(),
        });
    }
    Ok(Verdict {
        holds: dist.bias.abs() <= tol * ybar.abs().max(1.0),
        margin: dist.bias,
    })
}

/// Checks by enumeration that the sample covariance `n/(n-1) (ȳ - ū v̄)`
/// averages to the population `S_uv`. The margin is the difference.
pub fn exact_suv_unbiasedness(
    pop: &Population,
    n: usize,
    config: TransformConfig,
) -> Result<Verdict> {
    let design = Design::new(pop, n, Some(config))?;
    let subsets = enumerate_samples(pop.len(), n, DEFAULT_ENUMERATION_CAP)?;
    let mut acc = NeumaierSum::new();
    let mut count = 0usize;
    for s in subsets {
        acc += sample_suv(&design.stats(&s)?)?;
        count += 1;
    }
    let mean = acc.total() / count as f64;
    let suv = crate::population::summarize(pop, n, Some(config))?.require_suv()?;
    // s_uv is built from ȳ - ū v̄, so rounding scales with Ȳ, not with S_uv
    let scale = suv.abs().max(pop.mean_y().abs()).max(f64::MIN_POSITIVE);
    let diff = mean - suv;
    Ok(Verdict {
        holds: diff.abs() <= 1e-12 * scale,
        margin: diff,
    })
}
