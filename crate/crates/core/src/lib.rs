// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point tests built on weighted `L^p` functionals of the CUSUM
//! process.
//!
//! For a sample `X_1, ..., X_N` the CUSUM path `Z(k) = S_k - (k/N) S_N` is
//! rescaled to `Z_N(t)` on `[0, 1]` and three families of statistics are
//! offered, each with a Monte Carlo or analytic null distribution:
//!
//! * [`cusum::lp_statistic`]: `int_0^1 |Z_N|^p / w` for admissible weights,
//!   whose limit is `int_0^1 |B|^p / w` for a Brownian bridge `B`;
//! * [`cusum::darling_erdos_statistic`]: the weight `(t(1-t))^{1+p/2}`,
//!   centered by `2 b(p) log N` and scaled by `sqrt(4 a(p) log N)`, with a
//!   standard normal limit;
//! * [`cusum::renyi_statistic`]: heavier weights on a trimmed interval
//!   `(t1, t2)`, with the limit sampled by [`limits::sample_fb`].
//!
//! [`variance`] estimates the long-run variance that normalizes each
//! statistic, [`dgp`] simulates dependent noise with optional mean shifts,
//! and [`study`] runs size and power experiments.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cusum;
pub mod dgp;
pub mod error;
pub mod limits;
pub mod quad;
pub mod rng;
pub mod series;
pub mod study;
pub mod testing;
pub mod variance;
pub mod weight;

pub use cusum::{compute_cusum, CusumPath, Family, StatisticValue};
pub use error::{Error, Result};
pub use series::TimeSeries;
pub use weight::{check_weight_admissible, WeightSpec};

/// Version recorded in tables, caches and reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
