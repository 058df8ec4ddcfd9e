// SPDX-License-Identifier: MIT OR Apache-2.0

//! Synthetic series `X_i = mu0 + delta 1{i > k*} + e_i` with zero-mean,
//! weakly dependent noise `e_i`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::series::TimeSeries;

/// Steps discarded before recording recursive models.
pub const BURN_IN: usize = 1000;

/// Zero-mean noise process. `s` is the innovation standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    IidNormal {
        s: f64,
    },
    /// `scale * T_df`.
    IidStudentT {
        df: f64,
        scale: f64,
    },
    /// `e_i = rho e_{i-1} + s eta_i`.
    Ar1 {
        rho: f64,
        s: f64,
    },
    /// `e_i = s (eta_i + sum_j c_j eta_{i-j})`.
    Ma {
        coeffs: Vec<f64>,
        s: f64,
    },
    /// `e_i = a tanh(e_{i-1}) + s eta_i`.
    BernoulliShiftAr {
        a: f64,
        s: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be finite and > 0; got {v}")))
    }
}

fn contraction(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("|{name}| must be < 1; got {v}")))
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::IidNormal { s } => positive("s", *s),
            NoiseModel::IidStudentT { df, scale } => {
                positive("scale", *scale)?;
                if df.is_finite() && *df > 2.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "Student t needs df > 2 for a finite variance; got {df}"
                    )))
                }
            }
            NoiseModel::Ar1 { rho, s } => {
                positive("s", *s)?;
                contraction("rho", *rho)
            }
            NoiseModel::Ma { coeffs, s } => {
                positive("s", *s)?;
                match coeffs.iter().find(|c| !c.is_finite()) {
                    Some(c) => Err(Error::InvalidModel(format!(
                        "MA coefficients must be finite; got {c}"
                    ))),
                    None => Ok(()),
                }
            }
            NoiseModel::BernoulliShiftAr { a, s } => {
                positive("s", *s)?;
                contraction("a", *a)
            }
        }
    }

    /// Analytic long-run variance, or `None` where it has no closed form.
    pub fn true_lrv(&self) -> Option<f64> {
        match self {
            NoiseModel::IidNormal { s } => Some(s * s),
            NoiseModel::IidStudentT { df, scale } => Some(scale * scale * df / (df - 2.0)),
            NoiseModel::Ar1 { rho, s } => Some(s * s / ((1.0 - rho) * (1.0 - rho))),
            NoiseModel::Ma { coeffs, s } => {
                let g = 1.0 + coeffs.iter().sum::<f64>();
                Some(s * s * g * g)
            }
            NoiseModel::BernoulliShiftAr { .. } => None,
        }
    }

    /// `n` consecutive noise values drawn from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let out = match self {
            NoiseModel::IidNormal { s } => (0..n).map(|_| s * eta(rng)).collect(),
            NoiseModel::IidStudentT { df, scale } => {
                let t = StudentT::new(*df)
                    .map_err(|e| Error::InvalidModel(format!("Student t: {e}")))?;
                (0..n).map(|_| scale * t.sample(rng)).collect()
            }
            NoiseModel::Ar1 { rho, s } => recursive(n, |e| rho * e + s * eta(rng)),
            NoiseModel::BernoulliShiftAr { a, s } => {
                recursive(n, |e| a * e.tanh() + s * eta(rng))
            }
            NoiseModel::Ma { coeffs, s } => {
                let q = coeffs.len();
                let innovations: Vec<f64> = (0..n + q).map(|_| eta(rng)).collect();
                (0..n)
                    .map(|i| {
                        let t = i + q;
                        let lagged: f64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(j, c)| c * innovations[t - j - 1])
                            .sum();
                        s * (innovations[t] + lagged)
                    })
                    .collect()
            }
        };
        Ok(out)
    }
}

fn eta<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn recursive(n: usize, mut step: impl FnMut(f64) -> f64) -> Vec<f64> {
    let mut e = 0.0;
    for _ in 0..BURN_IN {
        e = step(e);
    }
    (0..n)
        .map(|_| {
            e = step(e);
            e
        })
        .collect()
}

/// Analytic long-run variance of `noise`, if known.
pub fn true_lrv(noise: &NoiseModel) -> Option<f64> {
    noise.true_lrv()
}

/// Mean structure: `mu0` up to `k_star`, `mu0 + delta` afterwards.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChangeSpec {
    #[serde(default)]
    pub k_star: Option<usize>,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub mu0: f64,
}

impl ChangeSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn at(k_star: usize, delta: f64) -> Self {
        Self {
            k_star: Some(k_star),
            delta,
            mu0: 0.0,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.delta.is_finite() || !self.mu0.is_finite() {
            return Err(Error::InvalidModel(
                "change magnitude and base mean must be finite".into(),
            ));
        }
        match self.k_star {
            Some(k) if k < 1 || k >= n => Err(Error::InvalidModel(format!(
                "change point must satisfy 1 <= k* < N = {n}; got {k}"
            ))),
            _ => Ok(()),
        }
    }

    /// Mean of observation `i` (1-based).
    pub fn mean_at(&self, i: usize) -> f64 {
        match self.k_star {
            Some(k) if i > k => self.mu0 + self.delta,
            _ => self.mu0,
        }
    }
}

/// [`generate_series`] drawing from a caller-supplied generator.
pub fn generate_series_with<R: Rng + ?Sized>(
    noise: &NoiseModel,
    change: &ChangeSpec,
    n: usize,
    rng: &mut R,
) -> Result<TimeSeries> {
    if n < TimeSeries::MIN_LEN {
        return Err(Error::InsufficientData {
            needed: TimeSeries::MIN_LEN,
            got: n,
        });
    }
    change.validate(n)?;
    let mut x = noise.sample(n, rng)?;
    for (i, v) in x.iter_mut().enumerate() {
        *v += change.mean_at(i + 1);
    }
    TimeSeries::new(x)
}

/// Simulates `n` observations; the same `seed` always yields the same series.
pub fn generate_series(
    noise: &NoiseModel,
    change: &ChangeSpec,
    n: usize,
    seed: u64,
) -> Result<TimeSeries> {
    generate_series_with(noise, change, n, &mut rng::stream(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variance::sample_autocorrelation;

    fn mean(x: &[f64]) -> f64 {
        x.iter().sum::<f64>() / x.len() as f64
    }

    #[test]
    fn iid_mean_near_zero() {
        let s = generate_series(&NoiseModel::IidNormal { s: 1.0 }, &ChangeSpec::none(), 10_000, 1)
            .unwrap();
        assert!(mean(s.values()).abs() < 0.03);
    }

    #[test]
    fn ar1_lag_one_autocorrelation() {
        let m = NoiseModel::Ar1 { rho: 0.5, s: 1.0 };
        let s = generate_series(&m, &ChangeSpec::none(), 10_000, 2).unwrap();
        let r = sample_autocorrelation(s.values(), 1);
        assert!((r - 0.5).abs() < 0.03, "{r}");
    }

    #[test]
    fn mean_shift_at_midpoint() {
        let n = 10_000;
        let s = generate_series(
            &NoiseModel::IidNormal { s: 1.0 },
            &ChangeSpec::at(n / 2, 2.0),
            n,
            3,
        )
        .unwrap();
        let (a, b) = s.values().split_at(n / 2);
        assert!((mean(b) - mean(a) - 2.0).abs() < 0.1);
    }

    #[test]
    fn ma_lag_structure() {
        let m = NoiseModel::Ma {
            coeffs: vec![0.5],
            s: 1.0,
        };
        let s = generate_series(&m, &ChangeSpec::none(), 100_000, 4).unwrap();
        // rho(1) = c / (1 + c^2) = 0.4, rho(2) = 0
        assert!((sample_autocorrelation(s.values(), 1) - 0.4).abs() < 0.02);
        assert!(sample_autocorrelation(s.values(), 2).abs() < 0.02);
    }

    #[test]
    fn analytic_long_run_variances() {
        assert_eq!(true_lrv(&NoiseModel::Ar1 { rho: 0.5, s: 1.0 }), Some(4.0));
        assert_eq!(true_lrv(&NoiseModel::IidNormal { s: 2.0 }), Some(4.0));
        let ma = NoiseModel::Ma {
            coeffs: vec![0.5],
            s: 1.0,
        };
        assert_eq!(true_lrv(&ma), Some(2.25));
        let t = NoiseModel::IidStudentT {
            df: 5.0,
            scale: 2.0,
        };
        assert!((true_lrv(&t).unwrap() - 4.0 * 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(true_lrv(&NoiseModel::BernoulliShiftAr { a: 0.5, s: 1.0 }), None);
    }

    #[test]
    fn invalid_models_are_rejected() {
        let bad = [
            NoiseModel::Ar1 { rho: 1.0, s: 1.0 },
            NoiseModel::BernoulliShiftAr { a: -1.2, s: 1.0 },
            NoiseModel::IidStudentT {
                df: 2.0,
                scale: 1.0,
            },
            NoiseModel::IidNormal { s: 0.0 },
            NoiseModel::Ma {
                coeffs: vec![f64::NAN],
                s: 1.0,
            },
        ];
        for m in bad {
            let err = generate_series(&m, &ChangeSpec::none(), 10, 0).unwrap_err();
            assert!(matches!(err, Error::InvalidModel(_)), "{m:?}");
        }
        let iid = NoiseModel::IidNormal { s: 1.0 };
        for k in [0, 10] {
            assert!(generate_series(&iid, &ChangeSpec::at(k, 1.0), 10, 0).is_err());
        }
    }

    #[test]
    fn seeds_reproduce_and_separate() {
        let m = NoiseModel::BernoulliShiftAr { a: 0.7, s: 1.0 };
        let a = generate_series(&m, &ChangeSpec::none(), 100, 9).unwrap();
        let b = generate_series(&m, &ChangeSpec::none(), 100, 9).unwrap();
        let c = generate_series(&m, &ChangeSpec::none(), 100, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn model_json_shape() {
        let m: NoiseModel = serde_json::from_str(r#"{"kind":"ar1","rho":0.3,"s":1.0}"#).unwrap();
        assert_eq!(m, NoiseModel::Ar1 { rho: 0.3, s: 1.0 });
        let c: ChangeSpec = serde_json::from_str(r#"{"k_star":50,"delta":1.0}"#).unwrap();
        assert_eq!(c, ChangeSpec::at(50, 1.0));
    }
}
