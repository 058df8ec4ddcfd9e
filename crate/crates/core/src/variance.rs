// SPDX-License-Identifier: MIT OR Apache-2.0

//! Kernel estimator of the long-run variance
//! `sigma^2 = sum_j Cov(e_0, e_j)` of the error sequence.
//!
//! `sigma_hat^2 = gamma(0) + 2 sum_{j=1}^{floor(h)} K(j/h) gamma(j)` with
//! sample autocovariances `gamma(j) = N^{-1} sum_i e_i e_{i+j}` of the
//! demeaned data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{demean, TimeSeries};

/// Lag window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    #[default]
    Bartlett,
    Parzen,
    /// Trapezoidal flat-top window: 1 up to `h/2`, linear to 0 at `h`.
    FlatTop,
}

impl Kernel {
    pub fn weight(self, x: f64) -> f64 {
        let x = x.abs();
        if x > 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Bartlett => 1.0 - x,
            Kernel::Parzen if x <= 0.5 => 1.0 - 6.0 * x * x + 6.0 * x * x * x,
            Kernel::Parzen => 2.0 * (1.0 - x).powi(3),
            Kernel::FlatTop if x <= 0.5 => 1.0,
            Kernel::FlatTop => 2.0 * (1.0 - x),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    #[default]
    Auto,
    Fixed(f64),
}

/// How residuals are formed before computing autocovariances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Demeaning {
    /// Subtract the grand mean (appropriate under no change).
    #[default]
    FullSample,
    /// Demean each half separately, which keeps a single mean shift from
    /// inflating the autocovariances.
    SplitHalf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LrvConfig {
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub bandwidth: Bandwidth,
    #[serde(default)]
    pub demeaning: Demeaning,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrvEstimate {
    pub sigma2: f64,
    pub bandwidth: f64,
    /// The kernel sum fell below the floor and was replaced by it.
    pub floored: bool,
    /// Zero sample variance (constant residuals).
    pub degenerate: bool,
}

impl LrvEstimate {
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

pub const MIN_LRV_LEN: usize = 4;
const FLOOR_FACTOR: f64 = 1e-12;
const PILOT_RHO_CLAMP: f64 = 0.97;

fn autocovariance(e: &[f64], lag: usize) -> f64 {
    let n = e.len();
    e[..n - lag]
        .iter()
        .zip(&e[lag..])
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / n as f64
}

fn check_len(series: &TimeSeries) -> Result<()> {
    if series.len() < MIN_LRV_LEN {
        return Err(Error::InsufficientData {
            needed: MIN_LRV_LEN,
            got: series.len(),
        });
    }
    Ok(())
}

fn residuals(series: &TimeSeries, demeaning: Demeaning) -> Vec<f64> {
    match demeaning {
        Demeaning::FullSample => series.demeaned(),
        Demeaning::SplitHalf => series.split_half_demeaned(),
    }
}

/// AR(1) plug-in bandwidth from residuals.
fn plug_in_bandwidth(e: &[f64], kernel: Kernel) -> f64 {
    let n = e.len() as f64;
    let g0 = autocovariance(e, 0);
    let rho = if g0 > 0.0 {
        (autocovariance(e, 1) / g0).clamp(-PILOT_RHO_CLAMP, PILOT_RHO_CLAMP)
    } else {
        0.0
    };
    let rho2 = rho * rho;
    let raw = match kernel {
        Kernel::Bartlett | Kernel::FlatTop => {
            let alpha = 4.0 * rho2 / ((1.0 - rho).powi(2) * (1.0 + rho).powi(2));
            1.1447 * (alpha * n).powf(1.0 / 3.0)
        }
        Kernel::Parzen => {
            let alpha = 4.0 * rho2 / (1.0 - rho).powi(4);
            2.6614 * (alpha * n).powf(0.2)
        }
    };
    raw.floor().clamp(1.0, n.sqrt().max(1.0))
}

/// Data-driven bandwidth from an AR(1) pilot fitted to the full-sample
/// residuals, clamped to `[1, sqrt(N)]`.
pub fn auto_bandwidth(series: &TimeSeries, kernel: Kernel) -> Result<f64> {
    check_len(series)?;
    Ok(plug_in_bandwidth(&series.demeaned(), kernel))
}

/// Long-run variance estimate, floored at `1e-12 gamma(0)` (or the smallest
/// positive double when `gamma(0) = 0`).
pub fn estimate_lrv(series: &TimeSeries, config: &LrvConfig) -> Result<LrvEstimate> {
    check_len(series)?;
    let n = series.len();
    let e = residuals(series, config.demeaning);
    let h = match config.bandwidth {
        Bandwidth::Auto => plug_in_bandwidth(&e, config.kernel),
        Bandwidth::Fixed(h) => {
            if !(h >= 1.0 && h <= (n - 1) as f64) {
                return Err(Error::InvalidParameter(format!(
                    "bandwidth must lie in [1, N-1] = [1, {}]; got {h}",
                    n - 1
                )));
            }
            h
        }
    };
    let g0 = autocovariance(&e, 0);
    let max_lag = (h.floor() as usize).min(n - 1);
    let mut s = g0;
    for j in 1..=max_lag {
        let k = config.kernel.weight(j as f64 / h);
        if k != 0.0 {
            s += 2.0 * k * autocovariance(&e, j);
        }
    }
    let floor = if g0 > 0.0 {
        FLOOR_FACTOR * g0
    } else {
        f64::MIN_POSITIVE
    };
    Ok(LrvEstimate {
        sigma2: s.max(floor),
        bandwidth: h,
        floored: !(s >= floor),
        degenerate: g0 == 0.0,
    })
}

/// Sample lag-`lag` autocorrelation about the mean.
pub fn sample_autocorrelation(values: &[f64], lag: usize) -> f64 {
    let e = demean(values);
    autocovariance(&e, lag) / autocovariance(&e, 0)
}
