// SPDX-License-Identifier: MIT OR Apache-2.0

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::weight::WeightSpec;

/// Which limit law a sample (or table) describes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum LimitFamily {
    /// `int_0^1 |B(t)|^p / w(t) dt`.
    GeneralWeighted { p: f64, weight: WeightSpec },
    /// Standard normal limit of the log-normalized statistic.
    DarlingErdosNormal { p: f64 },
    /// `gamma1^e I_1 + gamma2^e I_2` of the trimmed statistic.
    Renyi {
        p: f64,
        kappa: f64,
        gamma1: f64,
        gamma2: f64,
    },
}

/// Provenance of a limit sample or table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitMeta {
    #[serde(flatten)]
    pub family: LimitFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_horizon: Option<f64>,
    /// Expected mass added for the dropped end cells of the bridge grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint_compensation: Option<f64>,
}

impl LimitMeta {
    pub fn analytic(family: LimitFamily) -> Self {
        Self {
            family,
            grid_size: None,
            grid_step: None,
            replications: None,
            seed: None,
            truncation_horizon: None,
            endpoint_compensation: None,
        }
    }
}

/// Sorted Monte Carlo draws from a limit law.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitSample {
    draws: Vec<f64>,
    meta: LimitMeta,
}

/// Minimum replications for [`LimitSample::critical_value`].
pub const MIN_REPLICATIONS: usize = 100;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1); got {alpha}"
        )))
    }
}

impl LimitSample {
    /// Sorts `draws` ascending. `meta.replications` is set to the number of
    /// draws.
    pub fn new(mut draws: Vec<f64>, mut meta: LimitMeta) -> Self {
        draws.sort_unstable_by(f64::total_cmp);
        meta.replications = Some(draws.len());
        Self { draws, meta }
    }

    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    pub fn meta(&self) -> &LimitMeta {
        &self.meta
    }

    pub fn replications(&self) -> usize {
        self.draws.len()
    }

    pub fn mean(&self) -> f64 {
        self.draws.iter().sum::<f64>() / self.draws.len() as f64
    }

    /// Empirical `(1 - alpha)` quantile, taking the higher order statistic
    /// when `(n-1)(1-alpha)` is fractional.
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let n = self.draws.len();
        if n < MIN_REPLICATIONS {
            return Err(Error::Precision {
                replications: n,
                minimum: MIN_REPLICATIONS,
            });
        }
        let pos = (n - 1) as f64 * (1.0 - alpha);
        let idx = ((pos - 1e-9).ceil().max(0.0) as usize).min(n - 1);
        Ok(self.draws[idx])
    }

    /// `(1 + #{draws >= observed}) / (n + 1)`.
    pub fn p_value(&self, observed: f64) -> f64 {
        let below = self.draws.partition_point(|&d| d < observed);
        let at_or_above = self.draws.len() - below;
        (1 + at_or_above) as f64 / (self.draws.len() + 1) as f64
    }

    /// Writes a `#`-prefixed JSON metadata line followed by one draw per line.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {}", serde_json::to_string(&self.meta)?)?;
        for d in &self.draws {
            writeln!(w, "{d}")?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the format produced by [`LimitSample::write_to`].
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::TableFormat("empty sample file".into()))??;
        let json = header
            .strip_prefix('#')
            .ok_or_else(|| Error::TableFormat("missing '#' metadata line".into()))?;
        let meta: LimitMeta = serde_json::from_str(json.trim())?;
        let mut draws = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            draws.push(line.parse::<f64>().map_err(|e| {
                Error::TableFormat(format!("draw on line {}: {e}", i + 2))
            })?);
        }
        if meta.replications != Some(draws.len()) {
            return Err(Error::TableFormat(format!(
                "metadata lists {:?} replications but {} draws follow",
                meta.replications,
                draws.len()
            )));
        }
        Ok(Self::new(draws, meta))
    }
}

/// Null distribution of a normalized statistic.
#[derive(Clone, Debug, PartialEq)]
pub enum NullDistribution {
    Simulated(LimitSample),
    StandardNormal,
}

impl NullDistribution {
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        match self {
            NullDistribution::Simulated(s) => s.critical_value(alpha),
            NullDistribution::StandardNormal => {
                check_alpha(alpha)?;
                Ok(standard_normal().inverse_cdf(1.0 - alpha))
            }
        }
    }

    /// Upper-tail p-value of `observed`.
    pub fn p_value(&self, observed: f64) -> f64 {
        match self {
            NullDistribution::Simulated(s) => s.p_value(observed),
            NullDistribution::StandardNormal => standard_normal().sf(observed),
        }
    }
}

fn standard_normal() -> Normal {
    Normal::standard()
}

/// Two-sample Kolmogorov–Smirnov distance between empirical CDFs.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
