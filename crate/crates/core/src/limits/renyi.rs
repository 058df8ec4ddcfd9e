// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sampler for the trimmed (Renyi-type) limit
//! `gamma1^e I_1 + gamma2^e I_2`, `e = kappa - p/2 - 1`, where `I_1`, `I_2`
//! are independent copies of `int_1^inf |W(t)|^p / t^kappa dt`.
//!
//! The Wiener path is generated on a geometric grid `t_{j+1} = t_j (1 + step)`.
//! By Brownian scaling the integrand looks the same at every scale on such
//! a grid, so a fixed relative step gives uniform accuracy out to the
//! truncation horizon.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::compute_b;
use super::sample::{LimitFamily, LimitMeta, LimitSample};
use crate::error::{check_p, Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenyiLimitConfig {
    pub p: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Relative grid step on `[1, T]`.
    pub grid_step: f64,
    pub replications: usize,
    /// Bound on the expected truncated tail of each component integral.
    pub tail_tol: f64,
    pub seed: u64,
}

impl RenyiLimitConfig {
    pub const DEFAULT_GRID_STEP: f64 = 0.005;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-3;
}

fn check_kappa(p: f64, kappa: f64) -> Result<()> {
    check_p(p)?;
    let bound = p / 2.0 + 1.0;
    if !(kappa > bound) || !kappa.is_finite() {
        return Err(Error::DivergentLimit { p, kappa, bound });
    }
    Ok(())
}

/// Smallest `T >= 2` with expected tail
/// `E int_T^inf |W|^p / t^kappa = b(p) T^{p/2+1-kappa} / (kappa-p/2-1)`
/// at most `tail_tol`.
pub fn truncation_horizon(p: f64, kappa: f64, tail_tol: f64) -> Result<f64> {
    check_kappa(p, kappa)?;
    if !(tail_tol > 0.0 && tail_tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail_tol must be positive; got {tail_tol}"
        )));
    }
    let e = kappa - p / 2.0 - 1.0;
    let t = (compute_b(p) / (e * tail_tol)).powf(1.0 / e);
    Ok(t.max(2.0))
}

/// One draw of `int_1^T |W(t)|^p / t^kappa dt` by the trapezoid rule on a
/// geometric grid with relative step `grid_step`.
pub fn sample_wiener_tail_integral<R: Rng + ?Sized>(
    p: f64,
    kappa: f64,
    horizon: f64,
    grid_step: f64,
    rng: &mut R,
) -> f64 {
    let f = |w: f64, t: f64| {
        let a = w.abs();
        let ap = if p == 2.0 { a * a } else { a.powf(p) };
        ap * t.powf(-kappa)
    };
    let mut t = 1.0;
    let mut w: f64 = rng.sample(StandardNormal);
    let mut prev = f(w, t);
    let mut acc = 0.0;
    while t < horizon {
        let next = (t * (1.0 + grid_step)).min(horizon);
        let z: f64 = rng.sample(StandardNormal);
        w += (next - t).sqrt() * z;
        let cur = f(w, next);
        acc += 0.5 * (prev + cur) * (next - t);
        prev = cur;
        t = next;
    }
    acc
}

/// Draws of `gamma1^e I_1 + gamma2^e I_2`.
pub fn sample_fb(config: &RenyiLimitConfig) -> Result<LimitSample> {
    let RenyiLimitConfig {
        p,
        kappa,
        gamma1,
        gamma2,
        grid_step,
        replications,
        tail_tol,
        seed,
    } = *config;
    check_kappa(p, kappa)?;
    for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and > 0; got {g}"
            )));
        }
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid_step must lie in (0, 1]; got {grid_step}"
        )));
    }
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be positive".into()));
    }
    let horizon = truncation_horizon(p, kappa, tail_tol)?;
    let e = kappa - p / 2.0 - 1.0;
    let (c1, c2) = (gamma1.powf(e), gamma2.powf(e));
    // Components use disjoint stream ranges: 2r and 2r + 1.
    let draws: Vec<f64> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let i1 = sample_wiener_tail_integral(
                p,
                kappa,
                horizon,
                grid_step,
                &mut rng::stream(seed, 2 * r),
            );
            let i2 = sample_wiener_tail_integral(
                p,
                kappa,
                horizon,
                grid_step,
                &mut rng::stream(seed, 2 * r + 1),
            );
            c1 * i1 + c2 * i2
        })
        .collect();
    Ok(LimitSample::new(
        draws,
        LimitMeta {
            family: LimitFamily::Renyi {
                p,
                kappa,
                gamma1,
                gamma2,
            },
            grid_size: None,
            grid_step: Some(grid_step),
            seed: Some(seed),
            truncation_horizon: Some(horizon),
            endpoint_compensation: None,
            replications: Some(replications),
        },
    ))
}
