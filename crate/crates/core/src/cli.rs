//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 estimator failure,
//! 4 enumeration cap exceeded. Output is assembled in full and written once.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::estimators::{correlation_warning, Design, EstimatorKind};
use crate::exact::{exact_distribution_capped, verdict_from};
use crate::montecarlo::simulate_with_workers;
use crate::params::ParamsFile;
use crate::population::{
    draw_sample, summarize, Population, SummaryParams, TransformConfig, DEFAULT_ENUMERATION_CAP,
};
use crate::table::{Cell, Format, OutputTable};
use crate::theory::{efficiency_conditions, variance_first_order};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ESTIMATOR: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "unbiased-ratio",
    version,
    about = "Ratio-type estimators of a finite population mean"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Human, global = true)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Csv,
    Tsv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Csv => Format::Csv,
            FormatArg::Tsv => Format::Tsv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw one sample and evaluate estimators on it.
    Estimate(EstimateArgs),
    /// Relative efficiency of d_u over a range of L.
    Sweep(SweepArgs),
    /// Exact design expectation of each estimator by full enumeration.
    Verify(VerifyArgs),
    /// Monte-Carlo bias and variance against the first-order formulas.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Population CSV with header `x,y`.
    #[arg(long)]
    population: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Transform constant in u = L - x.
    #[arg(long = "L", allow_negative_numbers = true)]
    l: Option<f64>,
    /// Comma-separated estimator codes (default: all applicable).
    #[arg(long)]
    estimators: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VbarMode {
    Exact,
    Approx,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["params", "population"])))]
#[command(group(clap::ArgGroup::new("grid").required(true).args(["l_list", "l_range"])))]
struct SweepArgs {
    /// Summary constants file (key=value).
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    population: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated L values.
    #[arg(long = "L-list", allow_hyphen_values = true)]
    l_list: Option<String>,
    /// LO:HI:STEP.
    #[arg(long = "L-range", allow_hyphen_values = true)]
    l_range: Option<String>,
    /// How Vbar is obtained; defaults to exact for a population, approx for params.
    #[arg(long, value_enum)]
    vbar: Option<VbarMode>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    population: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long = "L", allow_negative_numbers = true)]
    l: Option<f64>,
    #[arg(long)]
    estimators: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Largest number of subsets to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    max_subsets: u128,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    population: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long = "L", allow_negative_numbers = true)]
    l: Option<f64>,
    #[arg(long)]
    estimators: Option<String>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => EXIT_TOO_LARGE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// A table plus the exit code it should be reported with.
struct Report {
    table: OutputTable,
    code: i32,
}

/// Runs the command line in `args` (including the program name).
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.table.render(cli.format.into()),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn kinds(list: Option<&str>, has_transform: bool) -> Result<Vec<EstimatorKind>, Failure> {
    let kinds = match list {
        Some(list) => {
            EstimatorKind::parse_list(list).map_err(|e| usage(format!("--estimators: {e}")))?
        }
        None => EstimatorKind::applicable(has_transform),
    };
    if kinds.is_empty() {
        return Err(usage("--estimators: no estimators given"));
    }
    if let Some(k) = kinds
        .iter()
        .find(|k| k.requires_transform() && !has_transform)
    {
        return Err(usage(format!("estimator {k} requires --L")));
    }
    Ok(kinds)
}

fn load_population(path: &PathBuf) -> Result<Population, Failure> {
    Population::read_csv(path).map_err(|e| usage(format!("--population {}: {e}", path.display())))
}

fn cmd_estimate(a: &EstimateArgs) -> Result<Report, Failure> {
    let pop = load_population(&a.population)?;
    let config = a.l.map(TransformConfig::new);
    let kinds = kinds(a.estimators.as_deref(), config.is_some())?;
    let design = Design::new(&pop, a.n, config)?;
    let rho = summarize(&pop, a.n, None).ok().map(|p| p.rho);
    let sample = draw_sample(&pop, a.n, a.seed)?;

    let mut table = OutputTable::new(["estimator", "estimate", "notes"]);
    let mut code = EXIT_OK;
    for kind in kinds {
        let (value, mut notes) = match design.estimate(kind, &sample) {
            Ok(v) => (Cell::Real(v), Vec::new()),
            Err(e) => {
                code = EXIT_ESTIMATOR;
                (Cell::Empty, vec![e.to_string()])
            }
        };
        if let Some(w) = rho.and_then(|r| correlation_warning(kind, r)) {
            notes.push(w.to_owned());
        }
        table.push(vec![kind.code().into(), value, notes.join("; ").into()]);
    }
    Ok(Report { table, code })
}

fn parse_grid(a: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let real = |s: &str, flag: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("{flag}: invalid number `{s}`")))
    };
    if let Some(list) = &a.l_list {
        return list.split(',').map(|s| real(s, "--L-list")).collect();
    }
    let range = a.l_range.as_deref().unwrap_or_default();
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!(
            "--L-range: expected LO:HI:STEP, found `{range}`"
        )));
    }
    let lo = real(parts[0], "--L-range")?;
    let hi = real(parts[1], "--L-range")?;
    let step = real(parts[2], "--L-range")?;
    if step <= 0.0 || hi < lo {
        return Err(usage("--L-range: need LO <= HI and STEP > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

const SWEEP_COLUMNS: [&str; 11] = [
    "L",
    "Vbar",
    "vbar_source",
    "V_du",
    "RE_vs_ybar",
    "RE_vs_d1u",
    "RE_vs_d2u",
    "beats_ybar_and_d1u",
    "beats_d2u",
    "beats_dstar",
    "status",
];

fn sweep_row(l: f64, p: Result<SummaryParams, Error>) -> Vec<Cell> {
    let report = p.and_then(|p| efficiency_conditions(&p));
    match report {
        Ok(r) => vec![
            l.into(),
            r.vbar.into(),
            r.vbar_source.to_string().into(),
            r.var_du.into(),
            r.re_vs_ybar.into(),
            r.re_vs_d1u.into(),
            r.re_vs_d2u.into(),
            r.beats_ybar_and_d1u.into(),
            r.beats_d2u.into(),
            r.beats_dstar.holds.into(),
            "ok".into(),
        ],
        Err(e) => {
            let status = match e {
                Error::DegenerateTransform(_) => "degenerate".to_owned(),
                other => other.to_string(),
            };
            let mut row = vec![Cell::Real(l)];
            row.extend(std::iter::repeat_n(Cell::Empty, SWEEP_COLUMNS.len() - 2));
            row.push(status.into());
            row
        }
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<Report, Failure> {
    let grid = parse_grid(a)?;
    let mut table = OutputTable::new(SWEEP_COLUMNS);

    if let Some(path) = &a.params {
        if a.vbar == Some(VbarMode::Exact) {
            return Err(usage(
                "--vbar exact needs raw population values; --params only has summary constants",
            ));
        }
        let file = ParamsFile::read(path)
            .map_err(|e| usage(format!("--params {}: {e}", path.display())))?;
        let base = SummaryParams::from_constants(&file.constants(a.n)?)?;
        for l in grid {
            table.push(sweep_row(l, base.with_approx_vbar(l)));
        }
    } else if let Some(path) = &a.population {
        let pop = load_population(path)?;
        let n =
            a.n.ok_or_else(|| usage("--n is required with --population"))?;
        summarize(&pop, n, None)?;
        let mode = a.vbar.unwrap_or(VbarMode::Exact);
        for l in grid {
            let p = summarize(&pop, n, Some(TransformConfig::new(l))).and_then(|p| match mode {
                VbarMode::Exact => Ok(p),
                VbarMode::Approx => p.with_approx_vbar(l),
            });
            table.push(sweep_row(l, p));
        }
    }
    Ok(Report {
        table,
        code: EXIT_OK,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Report, Failure> {
    let pop = load_population(&a.population)?;
    let config = a.l.map(TransformConfig::new);
    let kinds = kinds(a.estimators.as_deref(), config.is_some())?;
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(usage("--tol must be non-negative"));
    }
    let ybar = pop.mean_y();

    let mut table = OutputTable::new([
        "estimator",
        "exact_mean",
        "Ybar",
        "bias",
        "unbiased",
        "tol",
        "failed_samples",
    ]);
    let mut code = EXIT_OK;
    for kind in kinds {
        let dist = exact_distribution_capped(&pop, a.n, kind, config, a.max_subsets)?;
        let unbiased = match verdict_from(&dist, ybar, a.tol) {
            Ok(v) => Cell::Bool(v.holds),
            Err(_) => {
                code = EXIT_ESTIMATOR;
                Cell::Empty
            }
        };
        table.push(vec![
            kind.code().into(),
            dist.mean.into(),
            ybar.into(),
            dist.bias.into(),
            unbiased,
            a.tol.into(),
            dist.failed_samples.into(),
        ]);
    }
    Ok(Report { table, code })
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Report, Failure> {
    if a.reps < 2 {
        return Err(usage(format!("--reps must be at least 2, got {}", a.reps)));
    }
    if a.workers == Some(0) {
        return Err(usage("--workers must be positive"));
    }
    let pop = load_population(&a.population)?;
    let config = a.l.map(TransformConfig::new);
    let kinds = kinds(a.estimators.as_deref(), config.is_some())?;
    let reports = simulate_with_workers(&pop, a.n, &kinds, config, a.reps, a.seed, a.workers)?;
    let params = summarize(&pop, a.n, config).ok();

    let mut table = OutputTable::new([
        "estimator",
        "mc_mean",
        "mc_variance",
        "se",
        "formula_variance",
        "ratio",
        "failed_reps",
    ]);
    let mut code = EXIT_OK;
    for r in reports {
        if r.failed_reps > 0 {
            code = EXIT_ESTIMATOR;
        }
        let formula = params
            .as_ref()
            .and_then(|p| variance_first_order(r.estimator, p).ok())
            .map(|v| v.variance);
        table.push(vec![
            r.estimator.code().into(),
            r.mean.into(),
            r.variance.into(),
            r.std_error_of_mean.into(),
            formula.into(),
            formula.filter(|&f| f > 0.0).map(|f| r.variance / f).into(),
            r.failed_reps.into(),
        ]);
    }
    Ok(Report { table, code })
}
