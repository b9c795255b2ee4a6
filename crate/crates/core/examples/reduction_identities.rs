//! `d⁽ᵘ⁾` with `L = 0` is the Hartley-Ross estimator; with `L = N X̄ / n` it
//! is the unbiased dual-to-product estimator.

use unbiased_ratio::estimators::{
    dstar, dual_product_d2, hartley_ross_d3u, singh_singh_d2u, unbiased_du, SampleStats,
};
use unbiased_ratio::fixtures;
use unbiased_ratio::population::enumerate_samples;

fn main() -> unbiased_ratio::Result<()> {
    let pop = fixtures::p0();
    let (big_n, n) = (pop.len(), 2);
    let xbar = pop.mean_x();
    let l_dual = big_n as f64 * xbar / n as f64;

    for s in enumerate_samples(big_n, n, u128::MAX)? {
        let (x, y): (Vec<f64>, Vec<f64>) = s
            .indices()
            .iter()
            .map(|&i| (pop.x()[i], pop.y()[i]))
            .unzip();
        let zero = SampleStats::from_units(&x, &y, big_n, xbar, Some(0.0))?;
        let dual = SampleStats::from_units(&x, &y, big_n, xbar, Some(l_dual))?;
        println!(
            "{s}: du(0)={:.6} d3u={:.6} | du(NX/n)={:.6} d2u={:.6} | d*(NX/n)={:.6} d2={:.6}",
            unbiased_du(&zero, -xbar, big_n)?,
            hartley_ross_d3u(&zero, xbar, big_n)?,
            unbiased_du(&dual, l_dual - xbar, big_n)?,
            singh_singh_d2u(&dual, xbar, big_n)?,
            dstar(&dual, l_dual - xbar)?,
            dual_product_d2(&dual, xbar)?,
        );
    }
    Ok(())
}
