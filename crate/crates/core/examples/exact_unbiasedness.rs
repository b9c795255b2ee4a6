//! Enumerate every sample of a small population and compare the exact
//! means of the estimators with the population mean.

use unbiased_ratio::exact::exact_distribution;
use unbiased_ratio::population::summarize;
use unbiased_ratio::{EstimatorKind, Population, TransformConfig};

fn main() -> unbiased_ratio::Result<()> {
    let pop = Population::from_pairs([
        (3.0, 17.0),
        (5.5, 12.0),
        (4.0, 15.5),
        (8.0, 9.0),
        (6.5, 11.0),
        (2.0, 19.0),
    ])?;
    let n = 3;
    let config = Some(TransformConfig::new(-4.0));
    println!("Ybar = {}", pop.mean_y());

    for kind in EstimatorKind::ALL {
        let d = exact_distribution(&pop, n, kind, config)?;
        println!(
            "{:<6} mean {:>12.8}  bias {:>+10.2e}  variance {:>10.6}  over {} samples",
            kind.code(),
            d.mean,
            d.bias,
            d.variance,
            d.total_samples()
        );
    }

    // the biased plain version has bias exactly -(N-1)/N S_uv
    let p = summarize(&pop, n, config)?;
    let big_n = pop.len() as f64;
    println!(
        "-(N-1)/N S_uv = {:+.2e}",
        -(big_n - 1.0) / big_n * p.suv.unwrap()
    );
    Ok(())
}
