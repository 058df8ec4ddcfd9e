// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng;

/// Brownian bridge on the grid `t_j = j / grid_size`, `j = 0..=grid_size`.
///
/// Built from a Wiener path of independent `N(0, 1/grid_size)` increments
/// as `B(t) = W(t) - t W(1)`, which has the exact finite-dimensional law.
/// Both endpoints are exactly zero.
///
/// # Panics
///
/// If `grid_size < 2`.
pub fn sample_brownian_bridge<R: Rng + ?Sized>(grid_size: usize, rng: &mut R) -> Vec<f64> {
    let mut path = vec![0.0; grid_size + 1];
    fill_brownian_bridge(&mut path, rng);
    path
}

/// [`sample_brownian_bridge`] driven by stream 0 of `seed`.
pub fn sample_brownian_bridge_seeded(grid_size: usize, seed: u64) -> Vec<f64> {
    sample_brownian_bridge(grid_size, &mut rng::stream(seed, 0))
}

/// Overwrites `path` (length `grid_size + 1`) with a bridge sample.
pub(crate) fn fill_brownian_bridge<R: Rng + ?Sized>(path: &mut [f64], rng: &mut R) {
    let m = path.len() - 1;
    assert!(m >= 2, "grid_size must be at least 2; got {m}");
    let sd = (1.0 / m as f64).sqrt();
    path[0] = 0.0;
    let mut w = 0.0;
    for v in path[1..].iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        *v = w;
    }
    let w1 = path[m];
    for (j, v) in path.iter_mut().enumerate() {
        *v -= (j as f64 / m as f64) * w1;
    }
    path[m] = 0.0;
}
