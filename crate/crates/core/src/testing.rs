// SPDX-License-Identifier: MIT OR Apache-2.0

//! End-to-end change-point tests: statistic, scale estimate and null
//! distribution combined into an accept/reject decision.

use serde::{Deserialize, Serialize};

use crate::cusum::{
    darling_erdos_statistic_with, darling_erdos_weight, lp_statistic_with, renyi_statistic_with,
    renyi_weight, CusumPath, Family, StatisticValue,
};
use crate::error::{check_p, Error, Result};
use crate::limits::{
    compute_constants, sample_fb, sample_limit_general, AKernel, ConstantsPair,
    GeneralLimitConfig, LimitFamily, LimitMeta, NullDistribution, RenyiLimitConfig,
};
use crate::series::TimeSeries;
use crate::variance::{estimate_lrv, LrvConfig, LrvEstimate};
use crate::weight::{SegmentWeights, WeightSpec};
use crate::compute_cusum;

/// Which statistic to compute, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StatisticSpec {
    /// `int_0^1 |Z_N|^p / w` for an admissible weight.
    General { p: f64, weight: WeightSpec },
    /// Log-normalized statistic with weight `(t(1-t))^{1+p/2}`.
    DarlingErdos {
        p: f64,
        #[serde(default)]
        kernel: AKernel,
    },
    /// Trimmed statistic on `(t1, t2)` with weight `(t(1-t))^kappa`.
    Renyi { p: f64, kappa: f64, t1: f64, t2: f64 },
}

impl StatisticSpec {
    pub fn p(&self) -> f64 {
        match *self {
            StatisticSpec::General { p, .. }
            | StatisticSpec::DarlingErdos { p, .. }
            | StatisticSpec::Renyi { p, .. } => p,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            StatisticSpec::General { .. } => Family::GeneralWeighted,
            StatisticSpec::DarlingErdos { .. } => Family::DarlingErdos,
            StatisticSpec::Renyi { .. } => Family::Renyi,
        }
    }

    /// Parameter checks that do not depend on the sample size.
    pub fn validate(&self) -> Result<()> {
        check_p(self.p())?;
        match self {
            StatisticSpec::General { p, weight } => {
                if matches!(weight, WeightSpec::TrimmedPower { .. }) {
                    return Err(Error::InvalidParameter(
                        "trimmed weights belong to the renyi family".into(),
                    ));
                }
                weight.require_admissible(*p)
            }
            StatisticSpec::DarlingErdos { .. } => Ok(()),
            StatisticSpec::Renyi { p, kappa, t1, t2 } => {
                let bound = p / 2.0 + 1.0;
                if !(*kappa > bound && kappa.is_finite()) {
                    return Err(Error::DivergentLimit {
                        p: *p,
                        kappa: *kappa,
                        bound,
                    });
                }
                if !(*t1 > 0.0 && t1 < t2 && *t2 < 1.0) {
                    return Err(Error::InvalidTrim {
                        t1: *t1,
                        t2: *t2,
                        n: 0,
                        reason: "need 0 < t1 < t2 < 1".into(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Weight applied to `|Z_N|^p` for a sample of size `n`.
    pub fn weight(&self, n: usize) -> Result<WeightSpec> {
        match *self {
            StatisticSpec::General { weight, .. } => Ok(weight),
            StatisticSpec::DarlingErdos { p, .. } => Ok(darling_erdos_weight(p)),
            StatisticSpec::Renyi { p, kappa, t1, t2 } => renyi_weight(n, p, kappa, t1, t2),
        }
    }

    /// `(gamma1, gamma2) = (r / t1, r / (1 - t2))` with `r = min(t1, 1 - t2)`.
    pub fn renyi_gammas(t1: f64, t2: f64) -> (f64, f64) {
        let u = 1.0 - t2;
        if t1 <= u {
            (1.0, t1 / u)
        } else {
            (u / t1, 1.0)
        }
    }

    /// Limit law of the normalized statistic.
    pub fn limit_family(&self) -> LimitFamily {
        match *self {
            StatisticSpec::General { p, weight } => LimitFamily::GeneralWeighted { p, weight },
            StatisticSpec::DarlingErdos { p, .. } => LimitFamily::DarlingErdosNormal { p },
            StatisticSpec::Renyi { p, kappa, t1, t2 } => {
                let (gamma1, gamma2) = Self::renyi_gammas(t1, t2);
                LimitFamily::Renyi {
                    p,
                    kappa,
                    gamma1,
                    gamma2,
                }
            }
        }
    }
}

/// Monte Carlo settings for simulated null distributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullSettings {
    /// Bridge grid size for the general family.
    pub grid_size: usize,
    pub replications: usize,
    /// Relative grid step for the trimmed limit.
    pub grid_step: f64,
    /// Truncated-tail tolerance for the trimmed limit.
    pub tail_tol: f64,
}

impl Default for NullSettings {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            replications: 10_000,
            grid_step: RenyiLimitConfig::DEFAULT_GRID_STEP,
            tail_tol: RenyiLimitConfig::DEFAULT_TAIL_TOL,
        }
    }
}

/// Null distribution of the normalized statistic described by `spec`.
///
/// The Darling–Erdős family uses the standard normal; the others are
/// simulated with `seed`.
pub fn build_null(
    spec: &StatisticSpec,
    settings: &NullSettings,
    seed: u64,
) -> Result<(NullDistribution, LimitMeta)> {
    spec.validate()?;
    match *spec {
        StatisticSpec::General { p, weight } => {
            let sample = sample_limit_general(&GeneralLimitConfig {
                p,
                weight,
                grid_size: settings.grid_size,
                replications: settings.replications,
                seed,
            })?;
            let meta = sample.meta().clone();
            Ok((NullDistribution::Simulated(sample), meta))
        }
        StatisticSpec::DarlingErdos { .. } => Ok((
            NullDistribution::StandardNormal,
            LimitMeta::analytic(spec.limit_family()),
        )),
        StatisticSpec::Renyi { p, kappa, t1, t2 } => {
            let (gamma1, gamma2) = StatisticSpec::renyi_gammas(t1, t2);
            let sample = sample_fb(&RenyiLimitConfig {
                p,
                kappa,
                gamma1,
                gamma2,
                grid_step: settings.grid_step,
                replications: settings.replications,
                tail_tol: settings.tail_tol,
                seed,
            })?;
            let meta = sample.meta().clone();
            Ok((NullDistribution::Simulated(sample), meta))
        }
    }
}

/// How the long-run standard deviation is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaMode {
    /// Known `sigma` (not `sigma^2`).
    Fixed(f64),
    Estimate(LrvConfig),
}

impl Default for SigmaMode {
    fn default() -> Self {
        SigmaMode::Estimate(LrvConfig::default())
    }
}

/// Result of one test. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub family: Family,
    pub p: f64,
    pub weight: WeightSpec,
    #[serde(rename = "N")]
    pub n: usize,
    pub sigma2_hat: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    pub statistic_raw: f64,
    pub statistic_normalized: f64,
    pub alpha: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
}

/// A test for series of one fixed length, with segment integrals and
/// constants computed once.
#[derive(Clone, Debug)]
pub struct ChangePointTest {
    spec: StatisticSpec,
    weights: SegmentWeights,
    constants: Option<ConstantsPair>,
}

impl ChangePointTest {
    pub fn new(spec: StatisticSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        let needed = match spec {
            StatisticSpec::DarlingErdos { .. } => 3,
            _ => TimeSeries::MIN_LEN,
        };
        if n < needed {
            return Err(Error::InsufficientData { needed, got: n });
        }
        let weights = SegmentWeights::new(n, spec.weight(n)?)?;
        let constants = match spec {
            StatisticSpec::DarlingErdos { p, kernel } => Some(compute_constants(p, kernel)?),
            _ => None,
        };
        Ok(Self {
            spec,
            weights,
            constants,
        })
    }

    pub fn spec(&self) -> &StatisticSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weight(&self) -> &WeightSpec {
        self.weights.weight()
    }

    /// `a(p)`, `b(p)` for the Darling–Erdős family.
    pub fn constants(&self) -> Option<&ConstantsPair> {
        self.constants.as_ref()
    }

    fn check_len(&self, path: &CusumPath) -> Result<()> {
        if path.n() != self.n() {
            return Err(Error::InvalidInput(format!(
                "test prepared for N = {} applied to N = {}",
                self.n(),
                path.n()
            )));
        }
        Ok(())
    }

    /// Statistic of `path` scaled by `sigma`.
    ///
    /// For a flat path `raw = 0` and the scale is irrelevant, so it is not
    /// applied (it may be a floored, underflowing estimate).
    pub fn statistic(&self, path: &CusumPath, sigma: f64) -> Result<StatisticValue> {
        self.check_len(path)?;
        let sigma = if path.is_degenerate() { 1.0 } else { sigma };
        let p = self.spec.p();
        match self.spec {
            StatisticSpec::General { .. } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "sigma must be finite and > 0; got {sigma}"
                    )));
                }
                let raw = lp_statistic_with(path, p, &self.weights)?;
                Ok(StatisticValue {
                    family: Family::GeneralWeighted,
                    p,
                    raw,
                    normalized: raw / sigma.powf(p),
                })
            }
            StatisticSpec::DarlingErdos { .. } => {
                let c = self.constants.as_ref().expect("constants set for this family");
                darling_erdos_statistic_with(path, p, sigma, c.a_p, c.b_p, &self.weights)
            }
            StatisticSpec::Renyi { .. } => renyi_statistic_with(path, p, &self.weights, sigma),
        }
    }

    /// Runs the test on `series`.
    ///
    /// A constant series has a flat CUSUM path and is reported with
    /// `p_value = 1` and no rejection.
    pub fn run(
        &self,
        series: &TimeSeries,
        sigma: &SigmaMode,
        null: &NullDistribution,
        alpha: f64,
    ) -> Result<TestOutcome> {
        let (sigma2, lrv) = match sigma {
            SigmaMode::Fixed(s) => (s * s, None),
            SigmaMode::Estimate(cfg) => {
                let est: LrvEstimate = estimate_lrv(series, cfg)?;
                (est.sigma2, Some(est))
            }
        };
        let path = compute_cusum(series);
        let value = self.statistic(&path, sigma2.sqrt())?;
        let critical_value = null.critical_value(alpha)?;
        let (p_value, reject) = if path.is_degenerate() {
            (1.0, false)
        } else {
            (
                null.p_value(value.normalized),
                value.normalized > critical_value,
            )
        };
        Ok(TestOutcome {
            family: value.family,
            p: value.p,
            weight: *self.weight(),
            n: series.len(),
            sigma2_hat: sigma2,
            bandwidth: lrv.map(|e| e.bandwidth),
            statistic_raw: value.raw,
            statistic_normalized: value.normalized,
            alpha,
            critical_value,
            p_value,
            reject,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cvm() -> StatisticSpec {
        StatisticSpec::General {
            p: 2.0,
            weight: WeightSpec::Uniform,
        }
    }

    fn small_null() -> NullSettings {
        NullSettings {
            grid_size: 512,
            replications: 2_000,
            ..NullSettings::default()
        }
    }

    #[test]
    fn three_point_hand_example() {
        let series = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let (null, _) = build_null(&cvm(), &small_null(), 1).unwrap();
        let t = ChangePointTest::new(cvm(), 3).unwrap();
        let out = t.run(&series, &SigmaMode::Fixed(1.0), &null, 0.05).unwrap();
        assert!((out.statistic_raw - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(out.statistic_normalized, out.statistic_raw);
        assert_eq!(out.sigma2_hat, 1.0);
    }

    #[test]
    fn constant_series_never_rejects() {
        let series = TimeSeries::new(vec![2.5; 40]).unwrap();
        let specs = [
            cvm(),
            StatisticSpec::General {
                p: 3.0,
                weight: WeightSpec::Power { q: 2.0 },
            },
            StatisticSpec::DarlingErdos {
                p: 2.0,
                kernel: AKernel::default(),
            },
            StatisticSpec::Renyi {
                p: 2.0,
                kappa: 3.0,
                t1: 0.1,
                t2: 0.9,
            },
        ];
        for spec in specs {
            let (null, _) = build_null(&spec, &small_null(), 2).unwrap();
            let t = ChangePointTest::new(spec, 40).unwrap();
            let out = t
                .run(&series, &SigmaMode::default(), &null, 0.05)
                .unwrap();
            assert_eq!(out.statistic_raw, 0.0, "{spec:?}");
            assert!(out.statistic_normalized.is_finite());
            assert_eq!(out.p_value, 1.0);
            assert!(!out.reject);
        }
    }

    #[test]
    fn invalid_specs() {
        let inadmissible = StatisticSpec::General {
            p: 2.0,
            weight: WeightSpec::Power { q: 2.0 },
        };
        assert!(matches!(
            ChangePointTest::new(inadmissible, 10),
            Err(Error::InadmissibleWeight { .. })
        ));
        let divergent = StatisticSpec::Renyi {
            p: 2.0,
            kappa: 2.0,
            t1: 0.1,
            t2: 0.9,
        };
        assert!(matches!(
            build_null(&divergent, &small_null(), 0),
            Err(Error::DivergentLimit { .. })
        ));
        let too_narrow = StatisticSpec::Renyi {
            p: 2.0,
            kappa: 3.0,
            t1: 0.01,
            t2: 0.9,
        };
        assert!(matches!(
            ChangePointTest::new(too_narrow, 10),
            Err(Error::InvalidTrim { .. })
        ));
        let de = StatisticSpec::DarlingErdos {
            p: 1.0,
            kernel: AKernel::default(),
        };
        assert!(matches!(
            ChangePointTest::new(de, 2),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn renyi_gammas_are_relative_to_the_nearer_end() {
        let (g1, g2) = StatisticSpec::renyi_gammas(0.1, 0.9);
        assert!((g1 - 1.0).abs() < 1e-15 && (g2 - 1.0).abs() < 1e-15);
        assert_eq!(StatisticSpec::renyi_gammas(0.25, 0.75), (1.0, 1.0));
        let (g1, g2) = StatisticSpec::renyi_gammas(0.05, 0.8);
        assert!((g1 - 1.0).abs() < 1e-15 && (g2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn large_shift_is_detected() {
        let mut x: Vec<f64> = (0..200).map(|i| ((i * 37) % 11) as f64 / 11.0).collect();
        for v in &mut x[100..] {
            *v += 5.0;
        }
        let series = TimeSeries::new(x).unwrap();
        let (null, _) = build_null(&cvm(), &small_null(), 3).unwrap();
        let t = ChangePointTest::new(cvm(), 200).unwrap();
        let sigma = SigmaMode::Estimate(LrvConfig {
            demeaning: crate::variance::Demeaning::SplitHalf,
            ..LrvConfig::default()
        });
        let out = t.run(&series, &sigma, &null, 0.05).unwrap();
        assert!(out.reject);
        assert!(out.p_value < 0.01);
    }

    #[test]
    fn spec_json_shape() {
        let s: StatisticSpec =
            serde_json::from_str(r#"{"family":"renyi","p":2,"kappa":3,"t1":0.1,"t2":0.9}"#)
                .unwrap();
        assert_eq!(s.family(), Family::Renyi);
        let s: StatisticSpec =
            serde_json::from_str(r#"{"family":"general","p":1,"weight":{"kind":"power","q":0.5}}"#)
                .unwrap();
        assert_eq!(
            s,
            StatisticSpec::General {
                p: 1.0,
                weight: WeightSpec::Power { q: 0.5 }
            }
        );
    }
}
