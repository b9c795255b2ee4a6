//! Monte-Carlo moments against the first-order variance formulas.

use unbiased_ratio::montecarlo::simulate;
use unbiased_ratio::population::summarize;
use unbiased_ratio::theory::variance_first_order;
use unbiased_ratio::{fixtures, EstimatorKind, TransformConfig};

fn main() -> unbiased_ratio::Result<()> {
    let pop = fixtures::synthetic_500();
    let n = 50;
    let config = Some(TransformConfig::new(120.0));
    let p = summarize(&pop, n, config)?;
    let kinds = [
        EstimatorKind::SampleMean,
        EstimatorKind::RobsonD1u,
        EstimatorKind::SinghSinghD2u,
        EstimatorKind::TransformedRatioDstar,
        EstimatorKind::UnbiasedDu,
    ];
    let reports = simulate(&pop, n, &kinds, config, 200_000, 42)?;
    println!("Ybar = {:.4}", pop.mean_y());
    for r in reports {
        let formula = variance_first_order(r.estimator, &p)?.variance;
        println!(
            "{:<6} mean {:>9.4} ± {:.4}  variance {:>8.5}  formula {:>8.5}",
            r.estimator.code(),
            r.mean,
            r.std_error_of_mean,
            r.variance,
            formula
        );
    }
    Ok(())
}
