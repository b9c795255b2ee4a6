//! Point estimators of the population mean `Ȳ` computed from one sample and
//! the known constants `X̄`, `N` and (for the transformed family) `L`.
//!
//! Every estimator that divides unit-wise (`y_i / u_i`, `y_i / x_i`,
//! `y_i / x*_i`) fails on the first zero denominator instead of dropping the
//! unit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::population::{check_design, transform_x_star, Population, Sample, TransformConfig};
use crate::sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    /// `ȳ`.
    SampleMean,
    /// Product estimator `ȳ x̄ / X̄`.
    ProductD1,
    /// Dual-to-product estimator `ȳ X̄ / x̄*`.
    DualProductD2,
    /// Unbiased product-type estimator.
    RobsonD1u,
    /// Unbiased version of the dual-to-product estimator.
    SinghSinghD2u,
    /// Classical Hartley–Ross unbiased ratio estimator.
    HartleyRossD3u,
    /// Ratio estimator on the transformed variable, `ȳ Ū / ū`.
    TransformedRatioDstar,
    /// Unbiased ratio-type estimator on `u = L - x`.
    UnbiasedDu,
    /// `v̄ Ū`, the uncorrected mean-of-ratios estimator.
    PlainD,
    /// [`SinghSinghD2u`](Self::SinghSinghD2u) with the correction coefficient
    /// `(N-1)/(N(n-1))`, missing the factor `n`. Biased; kept for comparison.
    SinghSinghD2uUnscaled,
}

impl EstimatorKind {
    /// The regular roster, without the unscaled comparison variant.
    pub const ALL: [EstimatorKind; 9] = [
        EstimatorKind::SampleMean,
        EstimatorKind::ProductD1,
        EstimatorKind::DualProductD2,
        EstimatorKind::RobsonD1u,
        EstimatorKind::SinghSinghD2u,
        EstimatorKind::HartleyRossD3u,
        EstimatorKind::TransformedRatioDstar,
        EstimatorKind::UnbiasedDu,
        EstimatorKind::PlainD,
    ];

    /// Short name used on the command line and in tables.
    pub fn code(self) -> &'static str {
        match self {
            EstimatorKind::SampleMean => "ybar",
            EstimatorKind::ProductD1 => "d1",
            EstimatorKind::DualProductD2 => "d2",
            EstimatorKind::RobsonD1u => "d1u",
            EstimatorKind::SinghSinghD2u => "d2u",
            EstimatorKind::HartleyRossD3u => "d3u",
            EstimatorKind::TransformedRatioDstar => "dstar",
            EstimatorKind::UnbiasedDu => "du",
            EstimatorKind::PlainD => "d",
            EstimatorKind::SinghSinghD2uUnscaled => "d2u-unscaled",
        }
    }

    pub fn requires_transform(self) -> bool {
        matches!(
            self,
            EstimatorKind::TransformedRatioDstar
                | EstimatorKind::UnbiasedDu
                | EstimatorKind::PlainD
        )
    }

    /// Estimators that are design-unbiased for every population.
    pub fn is_exactly_unbiased(self) -> bool {
        matches!(
            self,
            EstimatorKind::SampleMean
                | EstimatorKind::RobsonD1u
                | EstimatorKind::SinghSinghD2u
                | EstimatorKind::HartleyRossD3u
                | EstimatorKind::UnbiasedDu
        )
    }

    /// The roster usable with or without a transform constant.
    pub fn applicable(has_transform: bool) -> Vec<EstimatorKind> {
        Self::ALL
            .into_iter()
            .filter(|k| has_transform || !k.requires_transform())
            .collect()
    }

    /// Parses a comma-separated list of codes.
    pub fn parse_list(list: &str) -> Result<Vec<EstimatorKind>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .chain([EstimatorKind::SinghSinghD2uUnscaled])
            .find(|k| k.code() == s)
            .ok_or_else(|| Error::InvalidDesign(format!("unknown estimator `{s}`")))
    }
}

/// Sample moments every estimator is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub xbar: f64,
    pub ybar: f64,
    /// Mean of `x_i y_i`.
    pub pbar: f64,
    /// `(N X̄ - n x̄) / (N - n)`.
    pub xstar_bar: f64,
    /// Mean of `y_i / x_i`; `None` when a sampled `x_i` is zero.
    pub rbar: Option<f64>,
    /// Mean of `y_i / x*_i`; `None` when a sampled `x*_i` is zero.
    pub rstar_bar: Option<f64>,
    /// Mean of `u_i = L - x_i`; `None` without a transform.
    pub ubar: Option<f64>,
    /// Mean of `v_i = y_i / u_i`; `None` without a transform.
    pub vbar: Option<f64>,
}

impl SampleStats {
    /// Builds the statistics from sampled unit values.
    pub fn from_units(
        x: &[f64],
        y: &[f64],
        population_size: usize,
        pop_xbar: f64,
        l: Option<f64>,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidDesign("x and y sample lengths differ".into()));
        }
        let n = x.len();
        check_design(population_size, n)?;
        let x_star = transform_x_star(x, population_size, n, pop_xbar)?;
        let ratio_mean = |den: &[f64]| -> Option<f64> {
            if den.contains(&0.0) {
                return None;
            }
            Some(
                y.iter()
                    .zip(den)
                    .map(|(a, b)| a / b)
                    .collect::<sum::NeumaierSum>()
                    .total()
                    / n as f64,
            )
        };
        let (ubar, vbar) = match l {
            Some(l) => {
                let u: Vec<f64> = x.iter().map(|&xi| l - xi).collect();
                if u.contains(&0.0) {
                    return Err(Error::DegenerateTransform(format!(
                        "L = {l} coincides with a sampled x value"
                    )));
                }
                (Some(sum::mean(&u)), ratio_mean(&u))
            }
            None => (None, None),
        };
        let xbar = sum::mean(x);
        let big_n = population_size as f64;
        Ok(Self {
            n,
            xbar,
            ybar: sum::mean(y),
            pbar: x
                .iter()
                .zip(y)
                .map(|(a, b)| a * b)
                .collect::<sum::NeumaierSum>()
                .total()
                / n as f64,
            xstar_bar: (big_n * pop_xbar - n as f64 * xbar) / (big_n - n as f64),
            rbar: ratio_mean(x),
            rstar_bar: ratio_mean(&x_star),
            ubar,
            vbar,
        })
    }

    fn u_moments(&self) -> Result<(f64, f64)> {
        match (self.ubar, self.vbar) {
            (Some(u), Some(v)) => Ok((u, v)),
            _ => Err(Error::MissingTransform("u")),
        }
    }
}

/// The constants an estimator may use besides the sample: `N`, `X̄`, `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownConstants {
    pub population_size: usize,
    pub xbar: f64,
    pub l: Option<f64>,
}

impl KnownConstants {
    /// `Ū = L - X̄`.
    pub fn ubar(&self) -> Option<f64> {
        self.l.map(|l| l - self.xbar)
    }
}

/// A population together with a fixed sample size and optional transform,
/// validated once so that many samples can be evaluated cheaply.
#[derive(Debug, Clone)]
pub struct Design<'a> {
    pop: &'a Population,
    n: usize,
    constants: KnownConstants,
}

impl<'a> Design<'a> {
    pub fn new(pop: &'a Population, n: usize, config: Option<TransformConfig>) -> Result<Self> {
        check_design(pop.len(), n)?;
        if let Some(cfg) = config {
            cfg.check(pop.x())?;
        }
        Ok(Self {
            pop,
            n,
            constants: KnownConstants {
                population_size: pop.len(),
                xbar: pop.mean_x(),
                l: config.map(|c| c.l),
            },
        })
    }

    pub fn population(&self) -> &Population {
        self.pop
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constants(&self) -> &KnownConstants {
        &self.constants
    }

    pub fn stats(&self, sample: &Sample) -> Result<SampleStats> {
        let (x, y): (Vec<f64>, Vec<f64>) = sample
            .indices()
            .iter()
            .map(|&i| (self.pop.x()[i], self.pop.y()[i]))
            .unzip();
        SampleStats::from_units(
            &x,
            &y,
            self.constants.population_size,
            self.constants.xbar,
            self.constants.l,
        )
    }

    pub fn estimate(&self, kind: EstimatorKind, sample: &Sample) -> Result<f64> {
        estimate(kind, &self.stats(sample)?, &self.constants)
    }
}

/// `n (N-1) / (N (n-1))`, the coefficient of the unbiased bias correction.
pub fn correction_coefficient(population_size: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDesign(format!(
            "sample size n = {n} must be at least 2"
        )));
    }
    let big_n = population_size as f64;
    let n = n as f64;
    Ok(n * (big_n - 1.0) / (big_n * (n - 1.0)))
}

pub fn sample_mean(s: &SampleStats) -> f64 {
    s.ybar
}

pub fn product_d1(s: &SampleStats, xbar: f64) -> Result<f64> {
    if xbar == 0.0 {
        return Err(Error::DivisionByZero("Xbar"));
    }
    Ok(s.ybar * s.xbar / xbar)
}

pub fn dual_product_d2(s: &SampleStats, xbar: f64) -> Result<f64> {
    if s.xstar_bar == 0.0 {
        return Err(Error::DivisionByZero("sample mean of x*"));
    }
    Ok(s.ybar * xbar / s.xstar_bar)
}

pub fn robson_d1u(s: &SampleStats, xbar: f64, population_size: usize) -> Result<f64> {
    if xbar == 0.0 {
        return Err(Error::DivisionByZero("Xbar"));
    }
    let c = correction_coefficient(population_size, s.n)?;
    let big_n = population_size as f64;
    let n = s.n as f64;
    let tail = (big_n - n) / (big_n * (n - 1.0));
    Ok(c * s.ybar * s.xbar / xbar - tail * s.pbar / xbar)
}

pub fn singh_singh_d2u(s: &SampleStats, xbar: f64, population_size: usize) -> Result<f64> {
    let c = correction_coefficient(population_size, s.n)?;
    let rstar = s.rstar_bar.ok_or(Error::DivisionByZero("a sampled x*"))?;
    Ok(rstar * xbar + c * (s.ybar - rstar * s.xstar_bar))
}

/// Dual-product correction with coefficient `(N-1)/(N(n-1))`. Not unbiased.
pub fn singh_singh_d2u_unscaled(s: &SampleStats, xbar: f64, population_size: usize) -> Result<f64> {
    let c = correction_coefficient(population_size, s.n)? / s.n as f64;
    let rstar = s.rstar_bar.ok_or(Error::DivisionByZero("a sampled x*"))?;
    Ok(rstar * xbar + c * (s.ybar - rstar * s.xstar_bar))
}

pub fn hartley_ross_d3u(s: &SampleStats, xbar: f64, population_size: usize) -> Result<f64> {
    let c = correction_coefficient(population_size, s.n)?;
    let rbar = s.rbar.ok_or(Error::DivisionByZero("a sampled x"))?;
    Ok(rbar * xbar + c * (s.ybar - rbar * s.xbar))
}

/// `ȳ Ū / ū`.
pub fn dstar(s: &SampleStats, ubar_pop: f64) -> Result<f64> {
    let (ubar, _) = s.u_moments()?;
    if ubar == 0.0 {
        return Err(Error::DivisionByZero("sample mean of u"));
    }
    Ok(s.ybar * ubar_pop / ubar)
}

/// `v̄ Ū`.
pub fn plain_d(s: &SampleStats, ubar_pop: f64) -> Result<f64> {
    let (_, vbar) = s.u_moments()?;
    Ok(vbar * ubar_pop)
}

/// Unbiased estimate of the bias of [`plain_d`]:
/// `-n(N-1)/(N(n-1)) (ȳ - ū v̄)`.
pub fn bias_hat(s: &SampleStats, population_size: usize) -> Result<f64> {
    let (ubar, vbar) = s.u_moments()?;
    let c = correction_coefficient(population_size, s.n)?;
    Ok(-c * (s.ybar - ubar * vbar))
}

/// Sample covariance of `u` and `v`, `n/(n-1) (ȳ - ū v̄)`.
pub fn sample_suv(s: &SampleStats) -> Result<f64> {
    let (ubar, vbar) = s.u_moments()?;
    if s.n < 2 {
        return Err(Error::InvalidDesign("s_uv needs n >= 2".into()));
    }
    let n = s.n as f64;
    Ok(n / (n - 1.0) * (s.ybar - ubar * vbar))
}

/// The unbiased ratio-type estimator: [`plain_d`] minus [`bias_hat`].
pub fn unbiased_du(s: &SampleStats, ubar_pop: f64, population_size: usize) -> Result<f64> {
    Ok(plain_d(s, ubar_pop)? - bias_hat(s, population_size)?)
}

/// Evaluates `kind` on one sample.
pub fn estimate(kind: EstimatorKind, s: &SampleStats, c: &KnownConstants) -> Result<f64> {
    let ubar_pop = || c.ubar().ok_or(Error::MissingTransform(kind.code()));
    match kind {
        EstimatorKind::SampleMean => Ok(sample_mean(s)),
        EstimatorKind::ProductD1 => product_d1(s, c.xbar),
        EstimatorKind::DualProductD2 => dual_product_d2(s, c.xbar),
        EstimatorKind::RobsonD1u => robson_d1u(s, c.xbar, c.population_size),
        EstimatorKind::SinghSinghD2u => singh_singh_d2u(s, c.xbar, c.population_size),
        EstimatorKind::SinghSinghD2uUnscaled => {
            singh_singh_d2u_unscaled(s, c.xbar, c.population_size)
        }
        EstimatorKind::HartleyRossD3u => hartley_ross_d3u(s, c.xbar, c.population_size),
        EstimatorKind::TransformedRatioDstar => dstar(s, ubar_pop()?),
        EstimatorKind::UnbiasedDu => unbiased_du(s, ubar_pop()?, c.population_size),
        EstimatorKind::PlainD => plain_d(s, ubar_pop()?),
    }
}

/// Warning text when the population correlation has the sign the estimator
/// was not built for. Estimates are still produced.
pub fn correlation_warning(kind: EstimatorKind, rho: f64) -> Option<&'static str> {
    match kind {
        EstimatorKind::UnbiasedDu | EstimatorKind::SinghSinghD2u if rho >= 0.0 => {
            Some("population rho >= 0; estimator targets negative correlation")
        }
        EstimatorKind::HartleyRossD3u if rho <= 0.0 => {
            Some("population rho <= 0; estimator targets positive correlation")
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0() -> Population {
        Population::new(vec![2.0, 4.0, 6.0, 8.0], vec![9.0, 7.0, 5.0, 3.0]).unwrap()
    }

    fn stats(indices: &[usize], l: Option<f64>) -> SampleStats {
        let pop = p0();
        let design = Design::new(&pop, indices.len(), l.map(TransformConfig::new)).unwrap();
        design
            .stats(&Sample::new(indices.to_vec(), 4).unwrap())
            .unwrap()
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} != {b}");
    }

    #[test]
    fn sample_statistics_p0() {
        let s = stats(&[0, 2], Some(10.0));
        assert_eq!(s.xbar, 4.0);
        assert_eq!(s.ybar, 7.0);
        assert_eq!(s.pbar, 24.0);
        assert_eq!(s.xstar_bar, 6.0);
        assert_eq!(s.ubar, Some(6.0));
        assert_close(s.vbar.unwrap(), 1.1875);
        assert_close(s.rstar_bar.unwrap(), 1.1875);
        assert_close(s.rbar.unwrap(), (4.5 + 5.0 / 6.0) / 2.0);
    }

    #[test]
    fn sample_mean_examples() {
        assert_eq!(sample_mean(&stats(&[0, 2], None)), 7.0);
        assert_eq!(sample_mean(&stats(&[1, 3], None)), 5.0);
        let s = SampleStats::from_units(&[1.0, 2.0], &[3.0, 3.0], 5, 2.0, None).unwrap();
        assert_eq!(sample_mean(&s), 3.0);
    }

    #[test]
    fn product_examples() {
        assert_close(product_d1(&stats(&[0, 2], None), 5.0).unwrap(), 5.6);
        assert_close(product_d1(&stats(&[0, 1], None), 5.0).unwrap(), 4.8);
        let s = stats(&[1, 2], None);
        assert_eq!(product_d1(&s, 5.0).unwrap(), s.ybar);
        assert_eq!(product_d1(&s, 0.0), Err(Error::DivisionByZero("Xbar")));
    }

    #[test]
    fn dual_product_examples() {
        assert_close(
            dual_product_d2(&stats(&[0, 2], None), 5.0).unwrap(),
            35.0 / 6.0,
        );
        assert_close(
            dual_product_d2(&stats(&[2, 3], None), 5.0).unwrap(),
            20.0 / 3.0,
        );
        let s = stats(&[1, 2], None);
        assert_eq!(dual_product_d2(&s, 5.0).unwrap(), s.ybar);
    }

    #[test]
    fn robson_examples() {
        assert_close(robson_d1u(&stats(&[0, 2], None), 5.0, 4).unwrap(), 6.0);
        assert_close(robson_d1u(&stats(&[0, 1], None), 5.0, 4).unwrap(), 4.9);
    }

    #[test]
    fn singh_singh_example() {
        assert_close(
            singh_singh_d2u(&stats(&[0, 2], None), 5.0, 4).unwrap(),
            5.75,
        );
    }

    #[test]
    fn hartley_ross_example() {
        assert_close(
            hartley_ross_d3u(&stats(&[0, 2], None), 5.0, 4).unwrap(),
            47.0 / 6.0,
        );
    }

    #[test]
    fn hartley_ross_fails_on_zero_x() {
        let s = SampleStats::from_units(&[0.0, 2.0], &[1.0, 3.0], 5, 2.0, None).unwrap();
        assert_eq!(
            hartley_ross_d3u(&s, 2.0, 5),
            Err(Error::DivisionByZero("a sampled x"))
        );
    }

    #[test]
    fn transformed_family_examples() {
        let s = stats(&[0, 2], Some(10.0));
        assert_close(dstar(&s, 5.0).unwrap(), 35.0 / 6.0);
        assert_close(plain_d(&s, 5.0).unwrap(), 5.9375);
        assert_close(bias_hat(&s, 4).unwrap(), 0.1875);
        assert_close(unbiased_du(&s, 5.0, 4).unwrap(), 5.75);
        assert_close(sample_suv(&s).unwrap(), 2.0 * (7.0 - 7.125));
    }

    #[test]
    fn dstar_identity_when_sample_matches() {
        // ū == Ū when x̄ == X̄
        let s = stats(&[1, 2], Some(10.0));
        assert_eq!(dstar(&s, 5.0).unwrap(), s.ybar);
    }

    #[test]
    fn proportional_case_is_exact() {
        // y = 3 u with L = 20
        let x = [1.0, 4.0, 7.0, 9.0, 12.0];
        let y: Vec<f64> = x.iter().map(|xi| 3.0 * (20.0 - xi)).collect();
        let pop = Population::new(x.to_vec(), y).unwrap();
        let design = Design::new(&pop, 3, Some(TransformConfig::new(20.0))).unwrap();
        let ubar_pop = design.constants().ubar().unwrap();
        for s in crate::population::enumerate_samples(5, 3, 100).unwrap() {
            let st = design.stats(&s).unwrap();
            assert_close(plain_d(&st, ubar_pop).unwrap(), 3.0 * ubar_pop);
            assert!(bias_hat(&st, 5).unwrap().abs() < 1e-12);
            assert_close(unbiased_du(&st, ubar_pop, 5).unwrap(), pop.mean_y());
        }
    }

    #[test]
    fn decomposition_is_exact() {
        let s = stats(&[1, 3], Some(-3.0));
        let ubar_pop = -8.0;
        assert_eq!(
            unbiased_du(&s, ubar_pop, 4).unwrap(),
            plain_d(&s, ubar_pop).unwrap() - bias_hat(&s, 4).unwrap()
        );
    }

    #[test]
    fn transform_required() {
        let s = stats(&[0, 2], None);
        let c = KnownConstants {
            population_size: 4,
            xbar: 5.0,
            l: None,
        };
        assert_eq!(
            estimate(EstimatorKind::UnbiasedDu, &s, &c),
            Err(Error::MissingTransform("du"))
        );
    }

    #[test]
    fn zero_u_is_degenerate() {
        assert!(matches!(
            SampleStats::from_units(&[2.0, 4.0], &[1.0, 1.0], 4, 5.0, Some(4.0)),
            Err(Error::DegenerateTransform(_))
        ));
    }

    #[test]
    fn codes_round_trip() {
        for k in EstimatorKind::ALL
            .into_iter()
            .chain([EstimatorKind::SinghSinghD2uUnscaled])
        {
            assert_eq!(k.code().parse::<EstimatorKind>().unwrap(), k);
        }
        assert!("nope".parse::<EstimatorKind>().is_err());
        assert_eq!(
            EstimatorKind::parse_list("du, d1u").unwrap(),
            vec![EstimatorKind::UnbiasedDu, EstimatorKind::RobsonD1u]
        );
        assert_eq!(EstimatorKind::applicable(false).len(), 6);
        assert_eq!(EstimatorKind::applicable(true).len(), 9);
    }

    #[test]
    fn warnings_follow_correlation_sign() {
        assert!(correlation_warning(EstimatorKind::UnbiasedDu, 0.2).is_some());
        assert!(correlation_warning(EstimatorKind::UnbiasedDu, -0.2).is_none());
        assert!(correlation_warning(EstimatorKind::SinghSinghD2u, 0.0).is_some());
        assert!(correlation_warning(EstimatorKind::HartleyRossD3u, -0.5).is_some());
        assert!(correlation_warning(EstimatorKind::HartleyRossD3u, 0.5).is_none());
        assert!(correlation_warning(EstimatorKind::SampleMean, 0.5).is_none());
    }
}
