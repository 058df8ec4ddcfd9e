// SPDX-License-Identifier: MIT OR Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use super::bridge::fill_brownian_bridge;
use super::constants::compute_b;
use super::sample::{LimitFamily, LimitMeta, LimitSample};
use crate::error::{check_p, Error, Result};
use crate::rng;
use crate::weight::WeightSpec;

/// Simulation settings for the weighted Brownian-bridge functional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralLimitConfig {
    pub p: f64,
    pub weight: WeightSpec,
    pub grid_size: usize,
    pub replications: usize,
    pub seed: u64,
}

/// Expected mass of `int |B(t)|^p / w(t) dt` over the two end cells
/// `[0, h]` and `[1-h, 1]`: `2 b(p) int_0^h (t(1-t))^{p/2 - q} dt`.
pub fn endpoint_compensation(p: f64, weight: &WeightSpec, h: f64) -> f64 {
    let e = p / 2.0 - weight.exponent() + 1.0;
    // int_0^h t^{e-1} (1-t)^{e-1} dt = B(e, e) I_h(e, e)
    2.0 * compute_b(p) * ln_beta(e, e).exp() * beta_reg(e, e, h)
}

/// Draws of `int_0^1 |B(t)|^p / w(t) dt`.
///
/// Each draw applies the trapezoid rule to `|B(t_j)|^p / w(t_j)` over the
/// interior cells of a `grid_size` grid. The first and last cells, where
/// `1/w` may be singular, are replaced by their expected contribution
/// (see [`endpoint_compensation`]), which is recorded in the metadata.
pub fn sample_limit_general(config: &GeneralLimitConfig) -> Result<LimitSample> {
    let GeneralLimitConfig {
        p,
        weight,
        grid_size,
        replications,
        seed,
    } = *config;
    check_p(p)?;
    weight.require_admissible(p)?;
    if matches!(weight, WeightSpec::TrimmedPower { .. }) {
        return Err(Error::InvalidParameter(
            "trimmed weights have the Renyi-type limit; use sample_fb".into(),
        ));
    }
    if grid_size < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid_size must be at least 3; got {grid_size}"
        )));
    }
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be positive".into()));
    }
    let h = 1.0 / grid_size as f64;
    let inv_w: Vec<f64> = (0..=grid_size)
        .map(|j| {
            if j == 0 || j == grid_size {
                0.0
            } else {
                1.0 / weight.eval(j as f64 * h)
            }
        })
        .collect();
    let compensation = endpoint_compensation(p, &weight, h);

    let draws: Vec<f64> = (0..replications as u64)
        .into_par_iter()
        .map_init(
            || vec![0.0; grid_size + 1],
            |path, r| {
                fill_brownian_bridge(path, &mut rng::stream(seed, r));
                let f = |j: usize| {
                    let b = path[j].abs();
                    let bp = if p == 2.0 { b * b } else { b.powf(p) };
                    bp * inv_w[j]
                };
                let inner: f64 = (2..grid_size - 1).map(f).sum();
                h * (inner + 0.5 * (f(1) + f(grid_size - 1))) + compensation
            },
        )
        .collect();

    Ok(LimitSample::new(
        draws,
        LimitMeta {
            family: LimitFamily::GeneralWeighted { p, weight },
            grid_size: Some(grid_size),
            grid_step: None,
            seed: Some(seed),
            truncation_horizon: None,
            endpoint_compensation: Some(compensation),
            replications: Some(replications),
        },
    ))
}
