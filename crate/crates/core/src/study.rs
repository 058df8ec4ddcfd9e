// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte Carlo size and power experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compute_cusum;
use crate::dgp::{generate_series, ChangeSpec, NoiseModel};
use crate::error::{Error, Result};
use crate::limits::{LimitMeta, NullDistribution, MIN_REPLICATIONS};
use crate::rng::derive_seed;
use crate::testing::{build_null, ChangePointTest, NullSettings, StatisticSpec};
use crate::variance::{estimate_lrv, Demeaning, LrvConfig};

/// Scale used to normalize each replication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudySigma {
    /// The analytic long-run variance of the noise model.
    True,
    /// Known `sigma`.
    Fixed(f64),
    Estimate(LrvConfig),
}

impl Default for StudySigma {
    /// Kernel estimate with split-half demeaning, so that a mean shift does
    /// not inflate the scale under the alternative.
    fn default() -> Self {
        StudySigma::Estimate(LrvConfig {
            demeaning: Demeaning::SplitHalf,
            ..LrvConfig::default()
        })
    }
}

fn default_alpha() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub noise: NoiseModel,
    #[serde(default)]
    pub change: ChangeSpec,
    #[serde(rename = "N")]
    pub n: usize,
    pub statistic: StatisticSpec,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub replications: usize,
    pub seed: u64,
    #[serde(default)]
    pub sigma: StudySigma,
    #[serde(default)]
    pub null: NullSettings,
    /// Include the per-replication statistics in the report.
    #[serde(default)]
    pub include_statistics: bool,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < MIN_REPLICATIONS {
            return Err(Error::Precision {
                replications: self.replications,
                minimum: MIN_REPLICATIONS,
            });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1); got {}",
                self.alpha
            )));
        }
        self.noise.validate()?;
        self.change.validate(self.n)?;
        self.statistic.validate()?;
        match self.sigma {
            StudySigma::True if self.noise.true_lrv().is_none() => Err(Error::InvalidParameter(
                "noise model has no analytic long-run variance".into(),
            )),
            StudySigma::Fixed(s) if !(s.is_finite() && s > 0.0) => Err(
                Error::InvalidParameter(format!("sigma must be finite and > 0; got {s}")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub tool_version: String,
    pub null: LimitMeta,
    pub critical_value: f64,
    pub rejections: usize,
    pub rejection_rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / replications)`.
    pub standard_error: f64,
    pub mean_statistic: f64,
    /// Normalized statistics in replication order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistics: Option<Vec<f64>>,
}

/// Seed of the series in replication `r`.
pub fn replication_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed, r as u64)
}

/// Normalized statistics of `config.replications` simulated series.
pub fn simulate_statistics(config: &StudyConfig, test: &ChangePointTest) -> Result<Vec<f64>> {
    config.validate()?;
    let fixed_sigma = match config.sigma {
        StudySigma::True => config.noise.true_lrv().map(f64::sqrt),
        StudySigma::Fixed(s) => Some(s),
        StudySigma::Estimate(_) => None,
    };
    (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let series = generate_series(
                &config.noise,
                &config.change,
                config.n,
                replication_seed(config.seed, r),
            )?;
            let sigma = match (fixed_sigma, &config.sigma) {
                (Some(s), _) => s,
                (None, StudySigma::Estimate(lrv)) => estimate_lrv(&series, lrv)?.sigma(),
                (None, _) => unreachable!("validated above"),
            };
            Ok(test.statistic(&compute_cusum(&series), sigma)?.normalized)
        })
        .collect()
}

/// Runs the study against a prepared null distribution.
pub fn run_study_with_null(
    config: &StudyConfig,
    null: &NullDistribution,
    null_meta: LimitMeta,
) -> Result<StudyReport> {
    let test = ChangePointTest::new(config.statistic, config.n)?;
    let statistics = simulate_statistics(config, &test)?;
    let critical_value = null.critical_value(config.alpha)?;
    let rejections = statistics.iter().filter(|&&s| s > critical_value).count();
    let reps = statistics.len() as f64;
    let rate = rejections as f64 / reps;
    Ok(StudyReport {
        config: config.clone(),
        tool_version: crate::TOOL_VERSION.to_owned(),
        null: null_meta,
        critical_value,
        rejections,
        rejection_rate: rate,
        standard_error: (rate * (1.0 - rate) / reps).sqrt(),
        mean_statistic: statistics.iter().sum::<f64>() / reps,
        statistics: config.include_statistics.then_some(statistics),
    })
}

/// Simulates the null distribution (seeded by `config.seed`) and runs the
/// study.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let (null, meta) = build_null(&config.statistic, &config.null, config.seed)?;
    run_study_with_null(config, &null, meta)
}
