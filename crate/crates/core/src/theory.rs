//! First-order biases and variances, relative efficiencies, the comparison
//! conditions between estimators and the optimal transform constant.
//!
//! Every first-order variance here has the shape
//! `(1-f)/n [Sy² + a² Sx² + 2 a ρ Sy Sx]` for some coefficient `a`:
//! `R` for the unbiased product estimator, `R̄* g` for the unbiased dual,
//! `θ R` for `d*` and `V̄` for `d⁽ᵘ⁾`.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::population::{Population, SummaryParams, VbarSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Exact,
    FirstOrder,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Exact => "exact",
            Order::FirstOrder => "first-order",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub estimator: EstimatorKind,
    pub variance: f64,
    pub order: Order,
}

/// `Sy² + a² Sx² + 2 a ρ Sy Sx`.
fn bracket(p: &SummaryParams, a: f64) -> f64 {
    p.sy2 + a * a * p.sx2 + 2.0 * a * p.rho * p.sy() * p.sx()
}

pub fn variance_first_order(kind: EstimatorKind, p: &SummaryParams) -> Result<VarianceReport> {
    let (a, order) = match kind {
        EstimatorKind::SampleMean => (0.0, Order::Exact),
        EstimatorKind::RobsonD1u => (p.r, Order::FirstOrder),
        EstimatorKind::SinghSinghD2u => (p.require_rstar_bar()? * p.g, Order::FirstOrder),
        EstimatorKind::TransformedRatioDstar => (p.require_theta()? * p.r, Order::FirstOrder),
        EstimatorKind::UnbiasedDu => (p.require_vbar()?.value, Order::FirstOrder),
        other => return Err(Error::Unsupported(other.code())),
    };
    Ok(VarianceReport {
        estimator: kind,
        variance: p.fpc_over_n() * bracket(p, a),
        order,
    })
}

/// First-order bias of `d*`: `(1-f)/n Ȳ θ Cx² (θ + K)`.
pub fn bias_first_order_dstar(p: &SummaryParams) -> Result<f64> {
    let theta = p.require_theta()?;
    Ok(p.fpc_over_n() * p.ybar * theta * p.cx * p.cx * (theta + p.k))
}

/// Exact bias of the uncorrected estimator `v̄ Ū`: `-(N-1)/N S_uv`.
pub fn bias_exact_plain_d(p: &SummaryParams) -> Result<f64> {
    let suv = p.require_suv()?;
    let big_n = p.population_size as f64;
    Ok(-(big_n - 1.0) / big_n * suv)
}

/// Variance of `d⁽ᵘ⁾` at the optimum `V̄ = -β`: `(1-f)/n Sy² (1 - ρ²)`.
pub fn min_variance_du(p: &SummaryParams) -> f64 {
    p.fpc_over_n() * p.sy2 * (1.0 - p.rho * p.rho)
}

/// Relative efficiency in percent of `candidate` against `baseline`:
/// `100 V(baseline) / V(candidate)`. Above 100 the candidate is better.
pub fn relative_efficiency(var_candidate: f64, var_baseline: f64) -> Result<f64> {
    if var_candidate <= 0.0 {
        return Err(Error::DivisionByZero("candidate variance"));
    }
    Ok(100.0 * var_baseline / var_candidate)
}

/// One inequality, with a signed margin that is positive exactly when the
/// inequality holds (for side conditions the margin refers to the main
/// inequality only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub holds: bool,
    pub margin: f64,
}

impl Condition {
    fn less(lhs: f64, rhs: f64) -> Self {
        Self {
            holds: lhs < rhs,
            margin: rhs - lhs,
        }
    }

    fn greater(lhs: f64, rhs: f64) -> Self {
        Self {
            holds: lhs > rhs,
            margin: lhs - rhs,
        }
    }

    fn and(self, side: bool) -> Self {
        Self {
            holds: self.holds && side,
            margin: self.margin,
        }
    }
}

/// Efficiency of `d⁽ᵘ⁾` at one `L` against `ȳ`, the unbiased product
/// estimator and the unbiased dual, plus each comparison inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub l: f64,
    pub vbar: f64,
    pub vbar_source: VbarSource,
    pub var_du: f64,
    pub re_vs_ybar: f64,
    pub re_vs_d1u: f64,
    /// `None` when `R̄*` is unavailable.
    pub re_vs_d2u: Option<f64>,
    /// Beats `ȳ`: `β < -V̄/2`.
    pub cond_ybar: Condition,
    /// Beats the product estimator when `V̄ > R`: `β < -(R/2)(1 + V̄/R)`.
    pub cond_d1u_above: Condition,
    /// Beats the product estimator when `V̄ < R`: `β > -(R/2)(1 + V̄/R)`.
    pub cond_d1u_below: Condition,
    /// The two-sided band `-(R/2)(1 + V̄/R) < β < -V̄/2` taken literally.
    /// Only meaningful when `V̄ < R`.
    pub band: Condition,
    /// Beats both `ȳ` and the product estimator.
    pub beats_ybar_and_d1u: bool,
    /// Beats the unbiased dual when `g < V̄/R̄*`: `β < -(R̄*/2)(g + V̄/R̄*)`.
    pub cond_d2u_above: Option<Condition>,
    /// Beats the unbiased dual when `g > V̄/R̄*`: `β > -(R̄*/2)(g + V̄/R̄*)`.
    pub cond_d2u_below: Option<Condition>,
    /// Either branch of the comparison with the unbiased dual holds.
    pub beats_d2u: Option<bool>,
    /// Beats `d*`: `(θR + β)² > (V̄ + β)²`.
    pub beats_dstar: Condition,
}

/// Evaluates the comparison conditions at the transform constant `p` was
/// evaluated at (see [`SummaryParams::with_approx_vbar`] and
/// [`crate::population::summarize`]).
pub fn efficiency_conditions(p: &SummaryParams) -> Result<EfficiencyReport> {
    let l = p.require_l()?;
    let vbar = p.require_vbar()?;
    let theta = p.require_theta()?;
    let v = vbar.value;
    let beta = p.beta;
    let r = p.r;

    let var_du = variance_first_order(EstimatorKind::UnbiasedDu, p)?.variance;
    let var_ybar = variance_first_order(EstimatorKind::SampleMean, p)?.variance;
    let var_d1u = variance_first_order(EstimatorKind::RobsonD1u, p)?.variance;
    let re_vs_d2u = match p.rstar_bar {
        Some(_) => Some(relative_efficiency(
            var_du,
            variance_first_order(EstimatorKind::SinghSinghD2u, p)?.variance,
        )?),
        None => None,
    };

    let cond_ybar = Condition::less(beta, -v / 2.0);
    let d1u_threshold = -(r / 2.0) * (1.0 + v / r);
    let cond_d1u_above = Condition::less(beta, d1u_threshold).and(v > r);
    let cond_d1u_below = Condition::greater(beta, d1u_threshold).and(v < r);
    let band_lower = Condition::greater(beta, d1u_threshold);
    let band = Condition {
        holds: band_lower.holds && cond_ybar.holds,
        margin: band_lower.margin.min(cond_ybar.margin),
    };
    let beats_ybar_and_d1u = cond_ybar.holds && (cond_d1u_above.holds || cond_d1u_below.holds);

    let d2u_threshold = p.rstar_bar.map(|rs| (rs, -(rs / 2.0) * (p.g + v / rs)));
    let cond_d2u_above = d2u_threshold.map(|(rs, t)| Condition::less(beta, t).and(p.g < v / rs));
    let cond_d2u_below = d2u_threshold.map(|(rs, t)| Condition::greater(beta, t).and(p.g > v / rs));
    let beats_d2u = cond_d2u_above
        .zip(cond_d2u_below)
        .map(|(a, b)| a.holds || b.holds);

    let beats_dstar = Condition::greater((theta * r + beta).powi(2), (v + beta).powi(2));

    Ok(EfficiencyReport {
        l,
        vbar: v,
        vbar_source: vbar.source,
        var_du,
        re_vs_ybar: relative_efficiency(var_du, var_ybar)?,
        re_vs_d1u: relative_efficiency(var_du, var_d1u)?,
        re_vs_d2u,
        cond_ybar,
        cond_d1u_above,
        cond_d1u_below,
        band,
        beats_ybar_and_d1u,
        cond_d2u_above,
        cond_d2u_below,
        beats_d2u,
        beats_dstar,
    })
}

/// How `V̄` depends on `L` when solving for the optimum.
#[derive(Debug, Clone, Copy)]
pub enum OptimalLMode<'a> {
    /// `V̄ ≈ Ȳ / (L - X̄)`, solved in closed form.
    Approximate,
    /// `V̄ = Σ y_i / (L - x_i) / N` over the raw population, solved by
    /// bisection for `L > max x`.
    Exact(&'a Population),
}

/// Residual tolerance `|V̄(L) + β|` of the exact solver.
pub const OPTIMAL_L_TOLERANCE: f64 = 1e-10;

/// The transform constant at which `V̄ = -β`, minimising the variance of
/// `d⁽ᵘ⁾`.
pub fn optimal_l(p: &SummaryParams, mode: OptimalLMode<'_>) -> Result<f64> {
    if p.beta >= 0.0 {
        return Err(Error::NoSolution(format!(
            "beta = {} is not negative; no L > max x gives Vbar = -beta",
            p.beta
        )));
    }
    let approx = p.xbar - p.ybar / p.beta;
    match mode {
        OptimalLMode::Approximate => Ok(approx),
        OptimalLMode::Exact(pop) => solve_exact(pop, p.beta, approx),
    }
}

fn solve_exact(pop: &Population, beta: f64, approx: f64) -> Result<f64> {
    let big_n = pop.len() as f64;
    let (_, max_x) = pop.x_range();
    let residual = |l: f64| -> f64 {
        let s: crate::sum::NeumaierSum = pop
            .x()
            .iter()
            .zip(pop.y())
            .map(|(&x, &y)| y / (l - x))
            .collect();
        s.total() / big_n + beta
    };

    let eps = 1e-9 * max_x.abs().max(1.0);
    let mut lo = max_x + eps;
    let width = (approx - max_x).max(1.0) * 10.0;
    let mut hi = max_x + width;
    let mut r_lo = residual(lo);
    let mut r_hi = residual(hi);
    let mut expansions = 0;
    while r_lo.signum() == r_hi.signum() {
        if expansions == 64 {
            return Err(Error::BracketFailure(format!(
                "Vbar(L) + beta keeps one sign on ({lo}, {hi}]"
            )));
        }
        lo = hi;
        r_lo = r_hi;
        hi = max_x + (hi - max_x) * 2.0;
        r_hi = residual(hi);
        expansions += 1;
    }

    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let r_mid = residual(mid);
        if r_mid.abs() <= OPTIMAL_L_TOLERANCE {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if r_mid.signum() == r_lo.signum() {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::BracketFailure(format!(
        "bisection stalled at L = {lo} without reaching |Vbar + beta| <= {OPTIMAL_L_TOLERANCE}"
    )))
}
