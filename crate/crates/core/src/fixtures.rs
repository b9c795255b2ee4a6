//! Small reference populations used by the examples and tests.

use crate::error::Result;
use crate::population::{Population, SummaryConstants, SummaryParams};

/// Four units with `y = 11 - x`, perfectly negatively correlated.
pub fn p0() -> Population {
    Population::new(vec![2.0, 4.0, 6.0, 8.0], vec![9.0, 7.0, 5.0, 3.0]).expect("valid population")
}

/// Published summary constants of the female literacy (`x`) and female
/// work participation (`y`) population, `N = 4`, `n = 2`. The raw values
/// are not available, so `V̄` can only be approximated.
pub fn literacy_constants() -> SummaryConstants {
    SummaryConstants {
        population_size: 4,
        n: 2,
        ybar: 4.87,
        xbar: 43.9175,
        sx2: 31.8575,
        sy2: 4.3118,
        rho: -0.7036,
        r: Some(0.1109),
        rstar_bar: Some(0.3099),
    }
}

pub fn literacy_params() -> SummaryParams {
    SummaryParams::from_constants(&literacy_constants()).expect("valid constants")
}

/// Deterministic linear population with a target correlation.
///
/// `x` is `size` evenly spaced values on `[x_lo, x_hi]`, and
/// `y = intercept - slope · x + c · e` where `e` is a sine pattern made
/// orthogonal to `x` and to the constant, and `c` is chosen so that the
/// population correlation is exactly `-rho_abs` (up to rounding).
pub fn synthetic_linear(
    size: usize,
    x_lo: f64,
    x_hi: f64,
    intercept: f64,
    slope: f64,
    rho_abs: f64,
) -> Result<Population> {
    let x: Vec<f64> = (0..size)
        .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (size - 1) as f64)
        .collect();
    let xm = x.iter().sum::<f64>() / size as f64;
    let mut e: Vec<f64> = (0..size).map(|i| (2.3 * i as f64 + 0.7).sin()).collect();
    let em = e.iter().sum::<f64>() / size as f64;
    e.iter_mut().for_each(|v| *v -= em);
    let sxx: f64 = x.iter().map(|xi| (xi - xm).powi(2)).sum();
    let sxe: f64 = x.iter().zip(&e).map(|(xi, ei)| (xi - xm) * ei).sum();
    let proj = sxe / sxx;
    e.iter_mut()
        .zip(&x)
        .for_each(|(ei, xi)| *ei -= proj * (xi - xm));

    let see: f64 = e.iter().map(|v| v * v).sum();
    // ρ² = slope² Sxx / (slope² Sxx + c² See)
    let c = (slope * slope * sxx * (1.0 / (rho_abs * rho_abs) - 1.0) / see).sqrt();
    let y = x
        .iter()
        .zip(&e)
        .map(|(xi, ei)| intercept - slope * xi + c * ei)
        .collect();
    Population::new(x, y)
}

/// The population used for first-order formula checks: 500 units, `x` on
/// `[20, 80]`, `y = 150 - x + noise` with correlation `-0.7`.
pub fn synthetic_500() -> Population {
    synthetic_linear(500, 20.0, 80.0, 150.0, 1.0, 0.7).expect("valid population")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::summarize;

    #[test]
    fn synthetic_correlation_is_on_target() {
        let pop = synthetic_500();
        let p = summarize(&pop, 50, None).unwrap();
        assert!((p.rho + 0.7).abs() < 1e-12);
        assert!(pop.y().iter().all(|&y| y > 0.0));
    }
}
