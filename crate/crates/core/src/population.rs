//! Finite populations, samples, the `u = L - x` transformation and the
//! population constants every analytic formula is written in.

use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sum;

/// Largest number of subsets [`enumerate_samples`] will walk by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Paired auxiliary (`x`) and study (`y`) values, one pair per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Population {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidPopulation(format!(
                "x has {} values but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InvalidPopulation(format!(
                "need at least 2 units, got {}",
                x.len()
            )));
        }
        if let Some(i) = x.iter().chain(&y).position(|v| !v.is_finite()) {
            let unit = i % x.len();
            return Err(Error::InvalidPopulation(format!(
                "unit {unit} has a non-finite value"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let (x, y) = pairs.into_iter().unzip();
        Self::new(x, y)
    }

    /// Parses the `x,y` CSV format: a header line that is exactly `x,y`,
    /// then one `x,y` decimal pair per line. Blank lines are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim_end_matches('\r') == "x,y" => {}
            Some((_, header)) => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("expected header `x,y`, found `{}`", header.trim_end()),
                })
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "empty input; expected header `x,y`".into(),
                })
            }
        }

        let mut x = Vec::new();
        let mut y = Vec::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            let parse = |field: &str, name: &str| -> Result<f64> {
                let field = field.trim();
                match field.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(Error::Parse {
                        line: line_no,
                        msg: format!("invalid {name} value `{field}`"),
                    }),
                }
            };
            x.push(parse(fields[0], "x")?);
            y.push(parse(fields[1], "y")?);
        }
        Self::new(x, y)
    }

    pub fn read_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn mean_x(&self) -> f64 {
        sum::mean(&self.x)
    }

    pub fn mean_y(&self) -> f64 {
        sum::mean(&self.y)
    }

    /// `(min x, max x)`.
    pub fn x_range(&self) -> (f64, f64) {
        range(&self.x)
    }

    /// Same population with unit order permuted by `order`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::InvalidPopulation(
                "permutation length mismatch".into(),
            ));
        }
        Self::new(
            order.iter().map(|&i| self.x[i]).collect(),
            order.iter().map(|&i| self.y[i]).collect(),
        )
    }
}

fn range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Canonical (strictly increasing) index set of a without-replacement sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sample {
    indices: Vec<usize>,
}

impl Sample {
    pub fn new(indices: Vec<usize>, population_size: usize) -> Result<Self> {
        check_design(population_size, indices.len())?;
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDesign(
                "sample indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= population_size {
                return Err(Error::InvalidDesign(format!(
                    "index {last} out of range for population of {population_size}"
                )));
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// `2 <= n < N`; the bias correction divides by `n - 1` and the dual
/// transformation by `N - n`.
pub fn check_design(population_size: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDesign(format!(
            "sample size n = {n} must be at least 2"
        )));
    }
    if n >= population_size {
        return Err(Error::InvalidDesign(format!(
            "sample size n = {n} must be smaller than the population size N = {population_size}"
        )));
    }
    Ok(())
}

/// The scalar `L` of the transformation `u = L - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    pub l: f64,
}

impl TransformConfig {
    pub fn new(l: f64) -> Self {
        Self { l }
    }

    /// `L` must lie strictly outside `[min x, max x]` so that every `u` is
    /// nonzero and all share one sign.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if !self.l.is_finite() {
            return Err(Error::DegenerateTransform(format!(
                "L = {} is not finite",
                self.l
            )));
        }
        let (lo, hi) = range(x);
        if self.l >= lo && self.l <= hi {
            return Err(Error::DegenerateTransform(format!(
                "L = {} lies inside the x range [{lo}, {hi}]",
                self.l
            )));
        }
        Ok(())
    }
}

/// `u_i = L - x_i`.
pub fn transform_u(x: &[f64], l: f64) -> Result<Vec<f64>> {
    TransformConfig::new(l).check(x)?;
    Ok(x.iter().map(|&xi| l - xi).collect())
}

/// Dual transformation `x*_i = (N X̄ - n x_i) / (N - n)`.
pub fn transform_x_star(
    x: &[f64],
    population_size: usize,
    n: usize,
    xbar: f64,
) -> Result<Vec<f64>> {
    if n >= population_size {
        return Err(Error::InvalidDesign(format!(
            "dual transformation needs n < N (n = {n}, N = {population_size})"
        )));
    }
    let big_n = population_size as f64;
    let n = n as f64;
    Ok(x.iter()
        .map(|&xi| (big_n * xbar - n * xi) / (big_n - n))
        .collect())
}

/// Where a `V̄` value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VbarSource {
    /// `Σ (y_i / u_i) / N` over the raw population.
    Exact,
    /// `Ȳ / (L - X̄)`, used when only summary constants are known.
    Approximated,
}

impl fmt::Display for VbarSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VbarSource::Exact => "exact",
            VbarSource::Approximated => "approximated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vbar {
    pub value: f64,
    pub source: VbarSource,
}

/// Population and design constants.
///
/// Dispersion statistics use the `N - 1` denominator. Fields that depend on
/// the transform constant (`l`, `theta`, `vbar`, `suv`) are `None` until one
/// is supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryParams {
    pub population_size: usize,
    pub n: usize,
    pub ybar: f64,
    pub xbar: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub sxy: f64,
    /// Set to 0 with `rho_degenerate` when either variance is zero.
    pub rho: f64,
    pub rho_degenerate: bool,
    /// `Ȳ / X̄`.
    pub r: f64,
    /// Mean of `y_i / x*_i` over the population; `None` when some `x*_i` is zero.
    pub rstar_bar: Option<f64>,
    /// `n / (N - n)`.
    pub g: f64,
    /// Sampling fraction `n / N`.
    pub f: f64,
    pub cx: f64,
    pub cy: f64,
    /// Regression coefficient of `y` on `x`.
    pub beta: f64,
    /// `rho Cy / Cx`.
    pub k: f64,
    pub l: Option<f64>,
    /// `X̄ / (L - X̄)`.
    pub theta: Option<f64>,
    pub vbar: Option<Vbar>,
    /// Population covariance of `u` and `v = y / u`.
    pub suv: Option<f64>,
}

/// Summary constants as they would be reported for a population whose raw
/// values are not at hand.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryConstants {
    pub population_size: usize,
    pub n: usize,
    pub ybar: f64,
    pub xbar: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub rho: f64,
    /// Defaults to `Ȳ / X̄`.
    pub r: Option<f64>,
    pub rstar_bar: Option<f64>,
}

impl SummaryParams {
    pub fn from_constants(c: &SummaryConstants) -> Result<Self> {
        check_design(c.population_size, c.n)?;
        let finite = [c.ybar, c.xbar, c.sx2, c.sy2, c.rho];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPopulation(
                "summary constants must be finite".into(),
            ));
        }
        if c.sx2 < 0.0 || c.sy2 < 0.0 {
            return Err(Error::InvalidPopulation(
                "variances must be non-negative".into(),
            ));
        }
        if !(-1.0..=1.0).contains(&c.rho) {
            return Err(Error::InvalidPopulation(format!(
                "rho = {} outside [-1, 1]",
                c.rho
            )));
        }
        let sxy = c.rho * (c.sx2 * c.sy2).sqrt();
        let mut p = Self::assemble(
            c.population_size,
            c.n,
            c.ybar,
            c.xbar,
            c.sx2,
            c.sy2,
            sxy,
            c.rstar_bar,
        )?;
        if c.sx2 > 0.0 && c.sy2 > 0.0 {
            p.rho = c.rho;
            p.rho_degenerate = false;
        }
        if let Some(r) = c.r {
            p.r = r;
        }
        Ok(p)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        population_size: usize,
        n: usize,
        ybar: f64,
        xbar: f64,
        sx2: f64,
        sy2: f64,
        sxy: f64,
        rstar_bar: Option<f64>,
    ) -> Result<Self> {
        if xbar == 0.0 {
            return Err(Error::DivisionByZero("Xbar"));
        }
        if ybar == 0.0 {
            return Err(Error::DivisionByZero("Ybar"));
        }
        let big_n = population_size as f64;
        let nf = n as f64;
        let (rho, rho_degenerate) = if sx2 > 0.0 && sy2 > 0.0 {
            ((sxy / (sx2 * sy2).sqrt()).clamp(-1.0, 1.0), false)
        } else {
            (0.0, true)
        };
        let sx = sx2.sqrt();
        let sy = sy2.sqrt();
        let cx = sx / xbar;
        let cy = sy / ybar;
        let beta = if sx2 > 0.0 { sxy / sx2 } else { 0.0 };
        let k = if cx != 0.0 { rho * cy / cx } else { 0.0 };
        Ok(Self {
            population_size,
            n,
            ybar,
            xbar,
            sx2,
            sy2,
            sxy,
            rho,
            rho_degenerate,
            r: ybar / xbar,
            rstar_bar,
            g: nf / (big_n - nf),
            f: nf / big_n,
            cx,
            cy,
            beta,
            k,
            l: None,
            theta: None,
            vbar: None,
            suv: None,
        })
    }

    /// Evaluates the transform-dependent constants at `l` with
    /// `V̄ ≈ Ȳ / (L - X̄)`. Any exact `S_uv` is kept only if `l` is unchanged.
    pub fn with_approx_vbar(&self, l: f64) -> Result<Self> {
        let ubar = l - self.xbar;
        if ubar == 0.0 {
            return Err(Error::DivisionByZero("L - Xbar"));
        }
        let mut p = self.clone();
        if p.l != Some(l) {
            p.suv = None;
        }
        p.l = Some(l);
        p.theta = Some(self.xbar / ubar);
        p.vbar = Some(Vbar {
            value: self.ybar / ubar,
            source: VbarSource::Approximated,
        });
        Ok(p)
    }

    pub fn sx(&self) -> f64 {
        self.sx2.sqrt()
    }

    pub fn sy(&self) -> f64 {
        self.sy2.sqrt()
    }

    /// Finite-population factor `(1 - f) / n` in front of every variance.
    pub fn fpc_over_n(&self) -> f64 {
        (1.0 - self.f) / self.n as f64
    }

    pub fn require_vbar(&self) -> Result<Vbar> {
        self.vbar.ok_or(Error::MissingParam("Vbar"))
    }

    pub fn require_theta(&self) -> Result<f64> {
        self.theta.ok_or(Error::MissingParam("theta"))
    }

    pub fn require_rstar_bar(&self) -> Result<f64> {
        self.rstar_bar.ok_or(Error::MissingParam("Rstar_bar"))
    }

    pub fn require_suv(&self) -> Result<f64> {
        self.suv.ok_or(Error::MissingParam("Suv"))
    }

    pub fn require_l(&self) -> Result<f64> {
        self.l.ok_or(Error::MissingParam("L"))
    }
}

fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let ma = sum::mean(a);
    let mb = sum::mean(b);
    let s = a
        .iter()
        .zip(b)
        .map(|(&ai, &bi)| (ai - ma) * (bi - mb))
        .collect::<sum::NeumaierSum>()
        .total();
    s / (a.len() - 1) as f64
}

/// Computes every constant from raw population values for samples of size `n`.
/// With a transform config, `V̄` and `S_uv` are exact.
pub fn summarize(
    pop: &Population,
    n: usize,
    config: Option<TransformConfig>,
) -> Result<SummaryParams> {
    let big_n = pop.len();
    check_design(big_n, n)?;
    if let Some(cfg) = config {
        cfg.check(pop.x())?;
    }
    let xbar = pop.mean_x();
    let ybar = pop.mean_y();
    let sx2 = covariance(pop.x(), pop.x());
    let sy2 = covariance(pop.y(), pop.y());
    let sxy = covariance(pop.x(), pop.y());

    let x_star = transform_x_star(pop.x(), big_n, n, xbar)?;
    let rstar_bar = if x_star.contains(&0.0) {
        None
    } else {
        let r: Vec<f64> = pop.y().iter().zip(&x_star).map(|(y, xs)| y / xs).collect();
        Some(sum::mean(&r))
    };

    let mut p = SummaryParams::assemble(big_n, n, ybar, xbar, sx2, sy2, sxy, rstar_bar)?;
    if let Some(cfg) = config {
        let u = transform_u(pop.x(), cfg.l)?;
        let v: Vec<f64> = pop.y().iter().zip(&u).map(|(y, u)| y / u).collect();
        p.l = Some(cfg.l);
        p.theta = Some(xbar / (cfg.l - xbar));
        p.vbar = Some(Vbar {
            value: sum::mean(&v),
            source: VbarSource::Exact,
        });
        p.suv = Some(covariance(&u, &v));
    }
    Ok(p)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Every `n`-subset of `0..N` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    population_size: usize,
    current: Vec<usize>,
    done: bool,
}

impl Iterator for Subsets {
    type Item = Sample;

    fn next(&mut self) -> Option<Sample> {
        if self.done {
            return None;
        }
        let out = Sample {
            indices: self.current.clone(),
        };
        let n = self.current.len();
        let big_n = self.population_size;
        match (0..n).rev().find(|&i| self.current[i] < big_n - n + i) {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..n {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// Lexicographic enumeration of all `C(N, n)` samples, refusing when that
/// count exceeds `cap`.
pub fn enumerate_samples(population_size: usize, n: usize, cap: u128) -> Result<Subsets> {
    check_design(population_size, n)?;
    let count = binomial(population_size, n);
    if count > cap {
        return Err(Error::TooLarge {
            population: population_size,
            n,
            count,
            cap,
        });
    }
    Ok(Subsets {
        population_size,
        current: (0..n).collect(),
        done: false,
    })
}

/// Uniform random `n`-subset of `0..N`, determined entirely by `seed`.
pub fn draw_indices(population_size: usize, n: usize, seed: u64) -> Result<Sample> {
    check_design(population_size, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = rand::seq::index::sample(&mut rng, population_size, n).into_vec();
    indices.sort_unstable();
    Ok(Sample { indices })
}

pub fn draw_sample(pop: &Population, n: usize, seed: u64) -> Result<Sample> {
    draw_indices(pop.len(), n, seed)
}
