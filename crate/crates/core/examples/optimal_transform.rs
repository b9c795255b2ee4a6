//! The variance-minimizing `L`, from summary constants and from raw data.

use unbiased_ratio::population::summarize;
use unbiased_ratio::theory::{efficiency_conditions, min_variance_du, optimal_l, OptimalLMode};
use unbiased_ratio::{fixtures, TransformConfig};

fn main() -> unbiased_ratio::Result<()> {
    let literacy = fixtures::literacy_params();
    let l = optimal_l(&literacy, OptimalLMode::Approximate)?;
    let at = efficiency_conditions(&literacy.with_approx_vbar(l)?)?;
    println!(
        "literacy constants: L* = {l:.4}, RE vs ybar {:.2}",
        at.re_vs_ybar
    );

    let pop = fixtures::synthetic_500();
    let n = 50;
    let base = summarize(&pop, n, None)?;
    let approx = optimal_l(&base, OptimalLMode::Approximate)?;
    let exact = optimal_l(&base, OptimalLMode::Exact(&pop))?;
    let p = summarize(&pop, n, Some(TransformConfig::new(exact)))?;
    let r = efficiency_conditions(&p)?;
    println!("synthetic N=500: approximate L* = {approx:.4}, exact L* = {exact:.4}");
    println!(
        "V(du) at exact L* = {:.6}, lower bound {:.6}, RE vs ybar {:.2}",
        r.var_du,
        min_variance_du(&p),
        r.re_vs_ybar
    );
    Ok(())
}
