//! Design-based estimation of a finite population mean with ratio-type
//! estimators built on the transformed auxiliary variable `u = L - x`.
//!
//! The central estimator is the unbiased ratio-type estimator
//!
//! ```text
//! d_u = v̄ Ū + n(N-1)/(N(n-1)) · (ȳ - ū v̄),    v_i = y_i / u_i,  Ū = L - X̄
//! ```
//!
//! which is exactly unbiased under simple random sampling without
//! replacement for any `L` outside the range of `x`. At `L = 0` it is the
//! Hartley–Ross estimator; at `L = N X̄ / n` it is the unbiased
//! dual-to-product estimator. The crate also provides
//!
//! - the comparator estimators ([`estimators`]),
//! - first-order variances, relative efficiencies, the comparison
//!   conditions and the optimal `L` ([`theory`]),
//! - exact sampling distributions by enumeration ([`exact`]),
//! - seeded Monte-Carlo replication ([`montecarlo`]),
//! - a command-line front end ([`cli`]).
//!
//! ```
//! use unbiased_ratio::{exact, fixtures, EstimatorKind, TransformConfig};
//!
//! let pop = fixtures::p0();
//! let dist = exact::exact_distribution(&pop, 2, EstimatorKind::UnbiasedDu, Some(TransformConfig::new(10.0)))?;
//! assert!((dist.mean - pop.mean_y()).abs() < 1e-12);
//! # Ok::<(), unbiased_ratio::Error>(())
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

#![forbid(unsafe_code)]

pub mod cli;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod fixtures;
pub mod montecarlo;
pub mod params;
pub mod population;
pub mod sum;
pub mod table;
pub mod theory;

pub use error::{Error, Result};
pub use estimators::{Design, EstimatorKind, KnownConstants, SampleStats};
pub use population::{Population, Sample, SummaryParams, TransformConfig, VbarSource};
