//! Draw one sample from a small population and evaluate every estimator on it.

use unbiased_ratio::estimators::correlation_warning;
use unbiased_ratio::population::draw_sample;
use unbiased_ratio::{fixtures, Design, EstimatorKind, TransformConfig};

fn main() -> unbiased_ratio::Result<()> {
    let pop = fixtures::p0();
    let design = Design::new(&pop, 2, Some(TransformConfig::new(10.0)))?;
    let sample = draw_sample(&pop, 2, 7)?;
    println!("population mean {:.4}, sample {sample}", pop.mean_y());

    let rho = unbiased_ratio::population::summarize(&pop, 2, None)?.rho;
    for kind in EstimatorKind::ALL {
        let value = design.estimate(kind, &sample)?;
        let note = correlation_warning(kind, rho).unwrap_or("");
        println!("{:<6} {value:>10.4}  {note}", kind.code());
    }
    Ok(())
}
