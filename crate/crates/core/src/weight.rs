// SPDX-License-Identifier: MIT OR Apache-2.0

//! Weight functions `w(t)` applied to `|Z_N(t)|^p` and their exact
//! integrals over the constancy segments of the CUSUM step function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// Weight function descriptor.
///
/// `Power { q }` is `w(t) = (t(1-t))^q` on `(0, 1)`. `TrimmedPower` uses the
/// exponent `kappa` and restricts integration to `(t1, t2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Uniform,
    Power { q: f64 },
    TrimmedPower { kappa: f64, t1: f64, t2: f64 },
}

/// Which limit regime a `(p, weight)` pair falls into.
#[derive(Clone, Debug, PartialEq)]
pub enum Admissibility {
    /// `int_0^1 (t(1-t))^{p/2} / w(t) dt < inf`: the functional converges to
    /// the weighted Brownian-bridge integral.
    Admissible,
    /// Integration stays away from 0 and 1; the trimmed (Renyi-type) limit
    /// applies instead.
    Trimmed,
    Inadmissible { reason: String },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightSpec::Uniform => Ok(()),
            WeightSpec::Power { q } => {
                if q.is_finite() && q >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "power weight exponent must be finite and >= 0; got {q}"
                    )))
                }
            }
            WeightSpec::TrimmedPower { kappa, t1, t2 } => {
                if !(kappa.is_finite() && kappa > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "kappa must be finite and > 0; got {kappa}"
                    )));
                }
                if !(t1 > 0.0 && t1 < t2 && t2 < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "trimming requires 0 < t1 < t2 < 1; got t1 = {t1}, t2 = {t2}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Exponent applied to `t(1-t)`.
    pub fn exponent(&self) -> f64 {
        match *self {
            WeightSpec::Uniform => 0.0,
            WeightSpec::Power { q } => q,
            WeightSpec::TrimmedPower { kappa, .. } => kappa,
        }
    }

    /// Integration window.
    pub fn window(&self) -> (f64, f64) {
        match *self {
            WeightSpec::TrimmedPower { t1, t2, .. } => (t1, t2),
            _ => (0.0, 1.0),
        }
    }

    /// `w(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let q = self.exponent();
        if q == 0.0 {
            1.0
        } else {
            (t * (1.0 - t)).powf(q)
        }
    }

    /// `int_a^b dt / w(t)` over the part of `[a, b]` inside the window.
    ///
    /// The interval must stay inside `(0, 1)` whenever the exponent is
    /// positive.
    pub fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        let (lo, hi) = self.window();
        let (a, b) = (a.max(lo), b.min(hi));
        if b <= a {
            return 0.0;
        }
        power_inverse_integral(self.exponent(), a, b)
    }

    pub fn admissibility(&self, p: f64) -> Admissibility {
        match *self {
            WeightSpec::Uniform => Admissibility::Admissible,
            WeightSpec::Power { q } => {
                let bound = p / 2.0 + 1.0;
                if q < bound {
                    Admissibility::Admissible
                } else {
                    Admissibility::Inadmissible {
                        reason: format!(
                            "int_0^1 (t(1-t))^(p/2 - q) dt diverges unless q < p/2 + 1 = {bound}"
                        ),
                    }
                }
            }
            WeightSpec::TrimmedPower { .. } => Admissibility::Trimmed,
        }
    }

    /// Errors with [`Error::InadmissibleWeight`] unless the weight is valid
    /// and admissible (or trimmed) for `p`.
    pub fn require_admissible(&self, p: f64) -> Result<()> {
        self.validate()?;
        match self.admissibility(p) {
            Admissibility::Inadmissible { reason } => Err(Error::InadmissibleWeight {
                p,
                q: self.exponent(),
                reason,
            }),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Uniform => write!(f, "uniform"),
            WeightSpec::Power { q } => write!(f, "power(q={q})"),
            WeightSpec::TrimmedPower { kappa, t1, t2 } => {
                write!(f, "trimmed-power(kappa={kappa}, t1={t1}, t2={t2})")
            }
        }
    }
}

/// `true` when `int_0^1 (t(1-t))^{p/2} / w(t) dt` is finite, or when the
/// weight is trimmed away from the endpoints.
pub fn check_weight_admissible(p: f64, weight: &WeightSpec) -> bool {
    !matches!(weight.admissibility(p), Admissibility::Inadmissible { .. })
}

/// `int dt / w(t)` over segment `k` of a sample of size `n`, i.e. over
/// `[k/(n+1), (k+1)/(n+1)]` clipped to the weight's window.
///
/// # Panics
///
/// If `k` is outside `1..=n-1`.
pub fn segment_weight_integral(k: usize, n: usize, weight: &WeightSpec) -> f64 {
    assert!(
        k >= 1 && k < n,
        "segment index {k} outside 1..={} for n = {n}",
        n.saturating_sub(1)
    );
    if matches!(weight, WeightSpec::Uniform) {
        return 1.0 / (n + 1) as f64;
    }
    // Power weights are symmetric about 1/2; mirroring keeps `t` small so
    // that `1 - t` is not formed from a rounded grid point near 1.
    let k = match weight {
        WeightSpec::Power { .. } if 2 * k > n => n - k,
        _ => k,
    };
    let h = (n + 1) as f64;
    weight.inverse_integral(k as f64 / h, (k + 1) as f64 / h)
}

/// `int_a^b (t(1-t))^{-q} dt` for `0 < a < b < 1` (or any `a < b` when
/// `q == 0`).
pub(crate) fn power_inverse_integral(q: f64, a: f64, b: f64) -> f64 {
    if q == 0.0 {
        b - a
    } else if q == 0.5 {
        (2.0 * b - 1.0).asin() - (2.0 * a - 1.0).asin()
    } else if q == 1.0 {
        (b / a).ln() + ((1.0 - a) / (1.0 - b)).ln()
    } else {
        quad::integrate(|t| (t * (1.0 - t)).powf(-q), a, b, Tolerance::default()).value
    }
}

/// `int dt / w(t)` for every segment `k = 1..n-1` of a sample of size `n`.
///
/// These depend only on `(n, weight)`, so repeated statistics on samples of
/// the same length should share one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentWeights {
    n: usize,
    weight: WeightSpec,
    integrals: Vec<f64>,
}

impl SegmentWeights {
    pub fn new(n: usize, weight: WeightSpec) -> Result<Self> {
        weight.validate()?;
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        let integrals = (1..n)
            .map(|k| segment_weight_integral(k, n, &weight))
            .collect();
        Ok(Self {
            n,
            weight,
            integrals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    /// Integral for segment `k` (`1 <= k <= n-1`).
    pub fn get(&self, k: usize) -> f64 {
        self.integrals[k - 1]
    }

    /// Integrals for segments `1..n-1` in order.
    pub fn as_slice(&self) -> &[f64] {
        &self.integrals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn uniform_segments_have_length_one_over_n_plus_one() {
        for k in 1..3 {
            assert_eq!(segment_weight_integral(k, 3, &WeightSpec::Uniform), 0.25);
        }
    }

    #[test]
    fn power_zero_matches_uniform() {
        for k in 1..10 {
            let u = segment_weight_integral(k, 10, &WeightSpec::Uniform);
            let p = segment_weight_integral(k, 10, &WeightSpec::Power { q: 0.0 });
            assert!(rel(p, u) < 1e-15);
        }
    }

    #[test]
    fn power_one_is_log_three_on_first_segment() {
        let v = segment_weight_integral(1, 3, &WeightSpec::Power { q: 1.0 });
        assert!((v - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for &q in &[0.5, 1.0] {
            for &(a, b) in &[(0.01, 0.02), (0.25, 0.5), (0.9, 0.99)] {
                let closed = power_inverse_integral(q, a, b);
                let numeric =
                    quad::integrate(|t| (t * (1.0 - t)).powf(-q), a, b, Tolerance::default())
                        .value;
                assert!(rel(closed, numeric) < 1e-12, "q={q} [{a},{b}]");
            }
        }
    }

    #[test]
    fn steep_segments_reach_relative_accuracy() {
        let n = 100_000;
        let w = WeightSpec::Power { q: 2.5 };
        let first = segment_weight_integral(1, n, &w);
        let last = segment_weight_integral(n - 1, n, &w);
        assert!(rel(first, last) < 1e-12);
        // t^{-2.5} dominates near 0: int t^{-2.5} = (2/3)(a^{-1.5} - b^{-1.5})
        let h = (n + 1) as f64;
        let approx = (2.0 / 3.0) * ((1.0 / h).powf(-1.5) - (2.0 / h).powf(-1.5));
        assert!(rel(first, approx) < 1e-3);
    }

    #[test]
    fn trimming_clips_segments() {
        let w = WeightSpec::TrimmedPower {
            kappa: 1.0,
            t1: 0.3,
            t2: 0.6,
        };
        // segment 1 of n = 3 is [0.25, 0.5]; clipped to [0.3, 0.5]
        let v = segment_weight_integral(1, 3, &w);
        let expect = (0.5f64 / 0.3).ln() + (0.7f64 / 0.5).ln();
        assert!(rel(v, expect) < 1e-14);
        // segment 2 is [0.5, 0.75]; clipped to [0.5, 0.6]
        let v2 = segment_weight_integral(2, 3, &w);
        let expect2 = (0.6f64 / 0.5).ln() + (0.5f64 / 0.4).ln();
        assert!(rel(v2, expect2) < 1e-14);
    }

    #[test]
    fn admissibility_boundary() {
        assert!(check_weight_admissible(2.0, &WeightSpec::Power { q: 1.0 }));
        assert!(!check_weight_admissible(2.0, &WeightSpec::Power { q: 2.0 }));
        assert!(check_weight_admissible(1.0, &WeightSpec::Uniform));
        let trimmed = WeightSpec::TrimmedPower {
            kappa: 5.0,
            t1: 0.1,
            t2: 0.9,
        };
        assert!(check_weight_admissible(2.0, &trimmed));
        assert_eq!(trimmed.admissibility(2.0), Admissibility::Trimmed);
        assert!(matches!(
            WeightSpec::Power { q: 2.0 }.require_admissible(2.0),
            Err(Error::InadmissibleWeight { .. })
        ));
    }

    #[test]
    fn validation() {
        assert!(WeightSpec::Power { q: -0.1 }.validate().is_err());
        assert!(WeightSpec::TrimmedPower {
            kappa: 3.0,
            t1: 0.5,
            t2: 0.5
        }
        .validate()
        .is_err());
        assert!(WeightSpec::TrimmedPower {
            kappa: 0.0,
            t1: 0.1,
            t2: 0.5
        }
        .validate()
        .is_err());
    }

    #[test]
    #[should_panic(expected = "segment index")]
    fn segment_index_precondition() {
        segment_weight_integral(0, 3, &WeightSpec::Uniform);
    }
}
