// SPDX-License-Identifier: MIT OR Apache-2.0

//! Limit distributions of the three statistic families, the constants
//! `a(p)` and `b(p)`, and conversion of Monte Carlo samples into critical
//! values, p-values and persisted tables.

mod bridge;
mod constants;
mod general;
mod renyi;
mod sample;
mod table;

pub use bridge::{sample_brownian_bridge, sample_brownian_bridge_seeded};
pub use constants::{
    compute_a, compute_b, compute_constants, correlation_excess, g_u_mass, AConstant, AKernel,
    ConstantsPair,
};
pub use general::{endpoint_compensation, sample_limit_general, GeneralLimitConfig};
pub use renyi::{
    sample_fb, sample_wiener_tail_integral, truncation_horizon, RenyiLimitConfig,
};
pub use sample::{
    ks_distance, LimitFamily, LimitMeta, LimitSample, NullDistribution, MIN_REPLICATIONS,
};
pub use table::{CriticalValueRow, CriticalValueTable, DEFAULT_ALPHAS};
