//! `key=value` files holding published summary constants.
//!
//! Recognised keys: `N`, `n`, `Ybar`, `Xbar`, `Sx2`, `Sy2`, `rho`, `R`,
//! `Rstar_bar`. Blank lines and lines starting with `#` are skipped; any
//! other key is rejected.

use std::path::Path;

use crate::error::{Error, Result};
use crate::population::SummaryConstants;

#[derive(Debug, Clone, PartialEq)]
pub struct ParamsFile {
    pub population_size: usize,
    pub n: Option<usize>,
    pub ybar: f64,
    pub xbar: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub rho: f64,
    pub r: Option<f64>,
    pub rstar_bar: Option<f64>,
}

const KEYS: [&str; 9] = [
    "N",
    "n",
    "Ybar",
    "Xbar",
    "Sx2",
    "Sy2",
    "rho",
    "R",
    "Rstar_bar",
];

impl ParamsFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: [Option<(usize, &str)>; 9] = [None; 9];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected key=value, found `{line}`"),
            })?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("unknown key `{key}`"),
                })?;
            if values[slot].is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            values[slot] = Some((line_no, value.trim()));
        }

        fn real(values: &[Option<(usize, &str)>; 9], slot: usize) -> Result<Option<f64>> {
            match values[slot] {
                None => Ok(None),
                Some((line, v)) => match v.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(Some(x)),
                    _ => Err(Error::Parse {
                        line,
                        msg: format!("invalid value `{v}` for `{}`", KEYS[slot]),
                    }),
                },
            }
        }
        fn count(values: &[Option<(usize, &str)>; 9], slot: usize) -> Result<Option<usize>> {
            match values[slot] {
                None => Ok(None),
                Some((line, v)) => v.parse::<usize>().map(Some).map_err(|_| Error::Parse {
                    line,
                    msg: format!("invalid integer `{v}` for `{}`", KEYS[slot]),
                }),
            }
        }
        let required = |slot: usize| -> Result<f64> {
            real(&values, slot)?.ok_or(Error::MissingParam(KEYS[slot]))
        };

        Ok(Self {
            population_size: count(&values, 0)?.ok_or(Error::MissingParam("N"))?,
            n: count(&values, 1)?,
            ybar: required(2)?,
            xbar: required(3)?,
            sx2: required(4)?,
            sy2: required(5)?,
            rho: required(6)?,
            r: real(&values, 7)?,
            rstar_bar: real(&values, 8)?,
        })
    }

    pub fn read<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resolves the sample size from the file and an optional override; the
    /// two must agree when both are given.
    pub fn constants(&self, n: Option<usize>) -> Result<SummaryConstants> {
        let n = match (self.n, n) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidDesign(format!(
                    "sample size {b} conflicts with n = {a} in the params file"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::MissingParam("n")),
        };
        Ok(SummaryConstants {
            population_size: self.population_size,
            n,
            ybar: self.ybar,
            xbar: self.xbar,
            sx2: self.sx2,
            sy2: self.sy2,
            rho: self.rho,
            r: self.r,
            rstar_bar: self.rstar_bar,
        })
    }
}
