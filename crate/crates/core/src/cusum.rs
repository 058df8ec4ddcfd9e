// SPDX-License-Identifier: MIT OR Apache-2.0

//! The CUSUM path and the three families of weighted `L^p` functionals.
//!
//! `Z_N(t) = N^{-1/2} Z(floor((N+1) t))` is a step function that vanishes
//! outside `[1/(N+1), N/(N+1))`, so every integral below is a finite sum of
//! `(|z_k| / sqrt(N))^p` times the integral of `1/w` over segment `k`.

use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::series::TimeSeries;
use crate::weight::{SegmentWeights, WeightSpec};

/// Exact CUSUM values `z[k] = sum_{i<=k} x_i - (k/N) sum_i x_i`, `k = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CusumPath {
    z: Vec<f64>,
}

/// Builds the CUSUM path of `series`.
///
/// Partial sums are taken over residuals about the mean, so `z[0]` and
/// `z[N]` are exactly zero and adding a constant to the data leaves the
/// path unchanged up to rounding.
pub fn compute_cusum(series: &TimeSeries) -> CusumPath {
    let residuals = series.demeaned();
    let n = residuals.len();
    let mut z = Vec::with_capacity(n + 1);
    z.push(0.0);
    let mut acc = 0.0;
    for e in &residuals[..n - 1] {
        acc += e;
        z.push(acc);
    }
    z.push(0.0);
    CusumPath { z }
}

impl CusumPath {
    /// Sample size `N`.
    pub fn n(&self) -> usize {
        self.z.len() - 1
    }

    /// `z[0..=N]`.
    pub fn values(&self) -> &[f64] {
        &self.z
    }

    /// `Z_N(t)` for `t` in `[0, 1]`.
    pub fn rescaled(&self, t: f64) -> f64 {
        let n = self.n();
        let k = ((n + 1) as f64 * t).floor();
        if !(k >= 0.0) || k as usize > n {
            return 0.0;
        }
        self.z[k as usize] / (n as f64).sqrt()
    }

    /// True when every CUSUM value is zero (constant data).
    pub fn is_degenerate(&self) -> bool {
        self.z.iter().all(|&v| v == 0.0)
    }

    /// Left endpoints `(k/(N+1), Z_N(k/(N+1)))` of each step plus `(1, 0)`.
    pub fn step_points(&self) -> Vec<(f64, f64)> {
        let n = self.n();
        let h = (n + 1) as f64;
        let scale = (n as f64).sqrt();
        self.z
            .iter()
            .enumerate()
            .map(|(k, &z)| (k as f64 / h, z / scale))
            .chain(std::iter::once((1.0, 0.0)))
            .collect()
    }
}

/// Which limit theorem a statistic is normalized for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GeneralWeighted,
    DarlingErdos,
    Renyi,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::GeneralWeighted => "general",
            Family::DarlingErdos => "darling-erdos",
            Family::Renyi => "renyi",
        })
    }
}

/// A statistic before (`raw`) and after (`normalized`) scaling by the
/// long-run standard deviation and any family-specific normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticValue {
    pub family: Family,
    pub p: f64,
    pub raw: f64,
    pub normalized: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sigma must be finite and > 0; got {sigma}"
        )))
    }
}

/// `int_0^1 |Z_N(t)|^p / w(t) dt`, evaluated exactly.
pub fn lp_statistic(path: &CusumPath, p: f64, weight: &WeightSpec) -> Result<f64> {
    check_p(p)?;
    weight.require_admissible(p)?;
    let weights = SegmentWeights::new(path.n(), *weight)?;
    lp_statistic_with(path, p, &weights)
}

/// [`lp_statistic`] with precomputed segment integrals.
///
/// Admissibility of `weights.weight()` is the caller's responsibility.
pub fn lp_statistic_with(path: &CusumPath, p: f64, weights: &SegmentWeights) -> Result<f64> {
    check_p(p)?;
    let n = path.n();
    if weights.n() != n {
        return Err(Error::InvalidParameter(format!(
            "segment weights built for n = {} applied to a path with n = {n}",
            weights.n()
        )));
    }
    let z = &path.z[1..n];
    let sum: f64 = if p == 2.0 {
        z.iter().zip(weights.as_slice()).map(|(v, w)| v * v * w).sum()
    } else {
        z.iter()
            .zip(weights.as_slice())
            .map(|(v, w)| v.abs().powf(p) * w)
            .sum()
    };
    Ok(sum * (n as f64).powf(-p / 2.0))
}

/// Statistic for the general weighted limit: `raw / sigma^p`.
pub fn general_weighted_statistic(
    path: &CusumPath,
    p: f64,
    weight: &WeightSpec,
    sigma: f64,
) -> Result<StatisticValue> {
    check_sigma(sigma)?;
    let raw = lp_statistic(path, p, weight)?;
    Ok(StatisticValue {
        family: Family::GeneralWeighted,
        p,
        raw,
        normalized: raw / sigma.powf(p),
    })
}

/// Checks `kappa > p/2 + 1` and that `(t1, t2)` is a non-empty sub-interval
/// of `[1/(n+1), n/(n+1)]`, returning the trimmed weight.
pub fn renyi_weight(n: usize, p: f64, kappa: f64, t1: f64, t2: f64) -> Result<WeightSpec> {
    check_p(p)?;
    let bound = p / 2.0 + 1.0;
    if !(kappa > bound) {
        return Err(Error::DivergentLimit { p, kappa, bound });
    }
    let h = (n + 1) as f64;
    let invalid = |reason: &str| Error::InvalidTrim {
        t1,
        t2,
        n,
        reason: reason.to_owned(),
    };
    if !(t1 < t2) {
        return Err(invalid("t1 must be below t2"));
    }
    // Compare on the (n+1) grid to tolerate t1 = 1/(n+1) given as a decimal.
    if t1 * h < 1.0 - 1e-12 || t2 * h > n as f64 + 1e-12 {
        return Err(invalid("interval must lie within [1/(n+1), n/(n+1)]"));
    }
    let weight = WeightSpec::TrimmedPower {
        kappa,
        t1: t1.max(1.0 / h),
        t2: t2.min(n as f64 / h),
    };
    weight.validate()?;
    Ok(weight)
}

/// `r^{kappa - p/2 - 1}` with `r = min(t1, 1 - t2)`.
pub fn renyi_scale(p: f64, kappa: f64, t1: f64, t2: f64) -> f64 {
    let r = t1.min(1.0 - t2);
    r.powf(kappa - p / 2.0 - 1.0)
}

/// Renyi-type statistic: `raw = int_{t1}^{t2} |Z_N|^p / (t(1-t))^kappa dt`
/// and `normalized = r^{kappa - p/2 - 1} raw / sigma^p`.
pub fn renyi_statistic(
    path: &CusumPath,
    p: f64,
    kappa: f64,
    t1: f64,
    t2: f64,
    sigma: f64,
) -> Result<StatisticValue> {
    let weight = renyi_weight(path.n(), p, kappa, t1, t2)?;
    let weights = SegmentWeights::new(path.n(), weight)?;
    renyi_statistic_with(path, p, &weights, sigma)
}

/// [`renyi_statistic`] with precomputed trimmed segment integrals.
pub fn renyi_statistic_with(
    path: &CusumPath,
    p: f64,
    weights: &SegmentWeights,
    sigma: f64,
) -> Result<StatisticValue> {
    check_sigma(sigma)?;
    let WeightSpec::TrimmedPower { kappa, t1, t2 } = *weights.weight() else {
        return Err(Error::InvalidParameter(
            "Renyi statistic needs trimmed-power segment weights".into(),
        ));
    };
    let bound = p / 2.0 + 1.0;
    if !(kappa > bound) {
        return Err(Error::DivergentLimit { p, kappa, bound });
    }
    let raw = lp_statistic_with(path, p, weights)?;
    Ok(StatisticValue {
        family: Family::Renyi,
        p,
        raw,
        normalized: renyi_scale(p, kappa, t1, t2) * raw / sigma.powf(p),
    })
}

/// `w(t) = (t(1-t))^{1 + p/2}`, the weight of the log-normalized statistic.
pub fn darling_erdos_weight(p: f64) -> WeightSpec {
    WeightSpec::Power { q: 1.0 + p / 2.0 }
}

/// Darling–Erdős-type statistic:
/// `raw = int_0^1 |Z_N|^p / (t(1-t))^{1+p/2} dt` and
/// `normalized = (raw / sigma^p - 2 b_p log N) / sqrt(4 a_p log N)`.
pub fn darling_erdos_statistic(
    path: &CusumPath,
    p: f64,
    sigma: f64,
    a_p: f64,
    b_p: f64,
) -> Result<StatisticValue> {
    check_p(p)?;
    let weights = SegmentWeights::new(path.n(), darling_erdos_weight(p))?;
    darling_erdos_statistic_with(path, p, sigma, a_p, b_p, &weights)
}

/// [`darling_erdos_statistic`] with precomputed segment integrals.
pub fn darling_erdos_statistic_with(
    path: &CusumPath,
    p: f64,
    sigma: f64,
    a_p: f64,
    b_p: f64,
    weights: &SegmentWeights,
) -> Result<StatisticValue> {
    check_p(p)?;
    check_sigma(sigma)?;
    if !(a_p.is_finite() && a_p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "a(p) must be finite and > 0; got {a_p}"
        )));
    }
    if !(b_p.is_finite() && b_p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "b(p) must be finite and > 0; got {b_p}"
        )));
    }
    let n = path.n();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if *weights.weight() != darling_erdos_weight(p) {
        return Err(Error::InvalidParameter(
            "segment weights do not use the exponent 1 + p/2".into(),
        ));
    }
    let raw = lp_statistic_with(path, p, weights)?;
    let log_n = (n as f64).ln();
    let normalized = (raw / sigma.powf(p) - 2.0 * b_p * log_n) / (4.0 * a_p * log_n).sqrt();
    Ok(StatisticValue {
        family: Family::DarlingErdos,
        p,
        raw,
        normalized,
    })
}
