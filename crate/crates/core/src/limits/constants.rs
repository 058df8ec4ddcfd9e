// SPDX-License-Identifier: MIT OR Apache-2.0

//! The centering constant `b(p) = E|N|^p` and the scaling constant
//! `a(p) = int du int int |xy|^p (g_u(x, y) - phi(x) phi(y)) dx dy`.
//!
//! `g_u` has the bivariate normal form with correlation `rho = e^{-|u|}`.
//! Its exponent carries `|xy|`, so on every quadrant it coincides with the
//! correlation-`rho` normal density folded onto the positive quadrant and
//! its total mass is `1 + 2 asin(rho) / pi`, not 1. [`AKernel`] selects
//! between that form and the signed-`xy` normal density.
//!
//! The inner double integral is reduced to a one-dimensional angular
//! integral: in polar coordinates the radial part is a Gamma integral,
//!
//! ```text
//! Q(p, rho) = int_0^inf int_0^inf (xy)^p f_rho(x, y) dx dy
//!           = Gamma(p+1) (1-rho^2)^(p+1/2) / (2 pi)
//!             * int_0^{pi/2} cos^p(psi) / (1 - rho cos psi)^(p+1) dpsi,
//! ```
//!
//! which is smooth in `psi` and integrated adaptively.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_p, Error, Result};
use crate::quad::{self, Tolerance};

/// `b(p) = int |x|^p phi(x) dx = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)`.
///
/// Defined for every `p > -1`.
pub fn compute_b(p: f64) -> f64 {
    (0.5 * p * std::f64::consts::LN_2 + ln_gamma(0.5 * (p + 1.0)) - 0.5 * PI.ln()).exp()
}

/// Form of the bivariate kernel inside `a(p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AKernel {
    /// `exp(-(x^2 + y^2 - 2 rho |xy|) / (2 (1 - rho^2)))`.
    #[default]
    AbsoluteProduct,
    /// `exp(-(x^2 + y^2 - 2 rho xy) / (2 (1 - rho^2)))`, the bivariate normal
    /// density; `a(p)` is then the integrated autocovariance of `|U(s)|^p`
    /// for a unit Ornstein–Uhlenbeck process.
    SignedProduct,
}

const INNER_TOL: Tolerance = Tolerance {
    abs: 1e-15,
    rel: 1e-12,
    max_panels: 400,
};

/// `Q(p, rho)` for `rho` in `(-1, 1)`, given `d = 1 - |rho|` and
/// `s = 1 - rho^2` computed without cancellation.
fn quadrant_moment(p: f64, rho: f64, one_minus_abs_rho: f64, one_minus_rho2: f64) -> f64 {
    let prefactor = (ln_gamma(p + 1.0) - (2.0 * PI).ln()).exp() * one_minus_rho2.powf(p + 0.5);
    let integrand = |psi: f64| {
        let c = psi.cos();
        // 1 - rho cos(psi), written to stay accurate as rho -> 1
        let denom = if rho >= 0.0 {
            one_minus_abs_rho + 2.0 * rho * (0.5 * psi).sin().powi(2)
        } else {
            1.0 - rho * c
        };
        c.powf(p) / denom.powf(p + 1.0)
    };
    // The integrand peaks at psi = 0 with width ~ sqrt(1 - rho).
    let width = one_minus_abs_rho.sqrt().max(1e-12);
    let mut breaks = vec![0.0];
    let mut b = 0.5 * width;
    while b < FRAC_PI_2 * 0.5 {
        breaks.push(b);
        b *= 4.0;
    }
    breaks.push(FRAC_PI_2);
    prefactor * quad::integrate_with_breaks(integrand, &breaks, INNER_TOL).value
}

/// `c(u) = int int |xy|^p (g_u - phi phi) dx dy`; even in `u`.
pub fn correlation_excess(u: f64, p: f64, kernel: AKernel) -> f64 {
    let u = u.abs();
    let rho = (-u).exp();
    let d = -(-u).exp_m1();
    let s = -(-2.0 * u).exp_m1();
    let b = compute_b(p);
    let same_sign = quadrant_moment(p, rho, d, s);
    match kernel {
        AKernel::AbsoluteProduct => 4.0 * same_sign - b * b,
        AKernel::SignedProduct => {
            let opposite = quadrant_moment(p, -rho, d, s);
            2.0 * same_sign + 2.0 * opposite - b * b
        }
    }
}

/// Total mass `int int g_u dx dy`, integrated numerically.
pub fn g_u_mass(u: f64, kernel: AKernel) -> f64 {
    correlation_excess(u, 0.0, kernel) + 1.0
}

/// `a(p)` with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AConstant {
    pub value: f64,
    pub error: f64,
}

/// Upper limit of the `u` integral. `c(u)` decays like `e^{-u}`, so the
/// neglected tail is about `c(U)`.
const U_MAX: f64 = 40.0;
const A_REL_ACCURACY: f64 = 1e-4;

/// `a(p) = 2 int_0^inf c(u) du`.
///
/// Errors with [`Error::Accuracy`] when the error estimate exceeds
/// `1e-4 * a(p)`.
pub fn compute_a(p: f64, kernel: AKernel) -> Result<AConstant> {
    check_p(p)?;
    // c(u) has a sqrt(u)-type endpoint behaviour at 0.
    let breaks = [
        0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0, 32.0,
        U_MAX,
    ];
    let outer = quad::integrate_with_breaks(
        |u| correlation_excess(u, p, kernel),
        &breaks,
        Tolerance {
            abs: 1e-13,
            rel: 1e-11,
            max_panels: 4_000,
        },
    );
    let tail = correlation_excess(U_MAX, p, kernel).abs();
    let value = 2.0 * outer.value;
    let error = 2.0 * (outer.error + tail);
    if !(value.is_finite() && value > 0.0) || error > A_REL_ACCURACY * value.abs() {
        return Err(Error::Accuracy {
            value,
            achieved: error / value.abs(),
            requested: A_REL_ACCURACY,
        });
    }
    Ok(AConstant { value, error })
}

/// `a(p)`, `b(p)` and diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsPair {
    pub p: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub kernel: AKernel,
    pub quadrature_error_estimate: f64,
    /// `int int g_u` at `u = 1`; `1 + 2 asin(e^{-1}) / pi` for
    /// [`AKernel::AbsoluteProduct`], 1 for the normal density.
    pub g_u_mass_check: f64,
}

pub fn compute_constants(p: f64, kernel: AKernel) -> Result<ConstantsPair> {
    let a = compute_a(p, kernel)?;
    Ok(ConstantsPair {
        p,
        a_p: a.value,
        b_p: compute_b(p),
        kernel,
        quadrature_error_estimate: a.error,
        g_u_mass_check: g_u_mass(1.0, kernel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Composite Simpson on `[-12, 12]`, split at the kink at 0.
    fn b_oracle(p: f64) -> f64 {
        let m = 2_000_000;
        let h = 12.0 / m as f64;
        let f = |x: f64| x.powf(p) * (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let mut s = f(0.0) + f(12.0);
        for i in 1..m {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        2.0 * s * h / 3.0
    }

    #[test]
    fn b_closed_form_values() {
        assert!((compute_b(2.0) - 1.0).abs() < 1e-12);
        assert!((compute_b(4.0) - 3.0).abs() < 1e-12);
        assert!((compute_b(1.0) - (2.0 / PI).sqrt()).abs() < 1e-12);
        assert!((compute_b(1.0) - 0.797_884_560_8).abs() < 1e-10);
    }

    #[test]
    fn b_matches_brute_force_quadrature() {
        for &p in &[1.0, 1.5, 2.0, 3.0, 4.0] {
            let o = b_oracle(p);
            assert!((compute_b(p) - o).abs() < 1e-9, "p={p}: {} vs {o}", compute_b(p));
        }
    }

    // Frozen from direct Cartesian integration of the defining double
    // integral over [-12, 12]^2 (adaptive 2-D quadrature, rel tol 1e-12).
    const C_ORACLE: [(f64, f64, f64, f64); 6] = [
        // (p, u, absolute-product kernel, signed kernel)
        (1.0, 0.3, 0.925_285_845_389_142_7, 0.184_467_624_707_424_62),
        (1.0, 1.0, 0.411_464_850_051_528, 0.043_585_408_880_085_55),
        (1.0, 3.0, 0.050_576_242_792_721_327, 0.000_789_174_424_857_486_1),
        (2.0, 0.3, 3.162_089_765_051_250_3, 1.097_623_272_188_054_3),
        (2.0, 1.0, 1.228_745_496_708_963_3, 0.270_670_566_473_225_2),
        (2.0, 3.0, 0.131_791_616_120_617_63, 0.004_957_504_353_332_309),
    ];

    #[test]
    fn inner_integral_matches_cartesian_oracle() {
        for &(p, u, abs_k, signed_k) in &C_ORACLE {
            let a = correlation_excess(u, p, AKernel::AbsoluteProduct);
            let s = correlation_excess(u, p, AKernel::SignedProduct);
            assert!(rel(a, abs_k) < 1e-8, "p={p} u={u}: {a} vs {abs_k}");
            assert!(rel(s, signed_k) < 1e-7, "p={p} u={u}: {s} vs {signed_k}");
        }
    }

    #[test]
    fn signed_kernel_p2_closed_form() {
        // E[X^2 Y^2] - 1 = 2 rho^2
        for &u in &[1e-6, 0.01, 0.5, 2.0, 7.0] {
            let c = correlation_excess(u, 2.0, AKernel::SignedProduct);
            let expect = 2.0 * (-2.0 * u).exp();
            assert!((c - expect).abs() < 1e-11, "u={u}: {c} vs {expect}");
        }
        let a = compute_a(2.0, AKernel::SignedProduct).unwrap();
        assert!((a.value - 2.0).abs() < 1e-9, "{a:?}");
    }

    #[test]
    fn mass_of_g_u() {
        for &u in &[0.05, 1.0, 4.0] {
            let rho = f64::exp(-u);
            let expect = 1.0 + 2.0 * rho.asin() / PI;
            let m = g_u_mass(u, AKernel::AbsoluteProduct);
            assert!((m - expect).abs() < 1e-11, "u={u}: {m} vs {expect}");
            assert!((g_u_mass(u, AKernel::SignedProduct) - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn excess_vanishes_for_large_u() {
        for &p in &[1.0, 2.0, 3.0, 4.0] {
            assert!(correlation_excess(20.0, p, AKernel::AbsoluteProduct).abs() <= 1e-6);
            assert!(correlation_excess(20.0, p, AKernel::SignedProduct).abs() <= 1e-6);
        }
    }

    #[test]
    fn excess_is_even_in_u() {
        let tol = Tolerance {
            abs: 1e-12,
            rel: 1e-10,
            max_panels: 2_000,
        };
        let left = quad::integrate_with_breaks(
            |u| correlation_excess(u, 1.0, AKernel::AbsoluteProduct),
            &[-30.0, -4.0, -1.0, -1e-3, 0.0],
            tol,
        );
        let right = quad::integrate_with_breaks(
            |u| correlation_excess(u, 1.0, AKernel::AbsoluteProduct),
            &[0.0, 1e-3, 1.0, 4.0, 30.0],
            tol,
        );
        assert!((left.value - right.value).abs() < 1e-9);
    }

    // For p = 1, 2 the quadrant moments E[(XY)^p 1{X,Y>0}] are elementary in
    // rho, leaving a one-dimensional integral over rho = e^{-u}; for p = 2
    // with the absolute-product kernel it evaluates to 6 + 2 ln 2.
    const A_ORACLE: [(f64, AKernel, f64); 3] = [
        (1.0, AKernel::AbsoluteProduct, 2.336_063_311_140_281),
        (1.0, AKernel::SignedProduct, 0.336_063_311_140_281),
        (2.0, AKernel::AbsoluteProduct, 7.386_294_361_119_891),
    ];

    #[test]
    fn a_matches_reduced_oracle() {
        for &(p, kernel, expect) in &A_ORACLE {
            let a = compute_a(p, kernel).unwrap();
            assert!(rel(a.value, expect) < 1e-10, "p={p} {kernel:?}: {a:?} vs {expect}");
        }
    }

    #[test]
    fn a_is_positive_with_small_error() {
        for &p in &[1.0, 2.0] {
            for kernel in [AKernel::AbsoluteProduct, AKernel::SignedProduct] {
                let a = compute_a(p, kernel).unwrap();
                assert!(a.value > 0.0);
                assert!(a.error < 1e-6 * a.value, "{p} {kernel:?} {a:?}");
            }
        }
    }

    #[test]
    fn constants_pair_reports_diagnostics() {
        let c = compute_constants(2.0, AKernel::AbsoluteProduct).unwrap();
        assert_eq!(c.b_p, compute_b(2.0));
        assert!(c.g_u_mass_check > 1.2 && c.g_u_mass_check < 1.3);
        assert!(compute_a(0.5, AKernel::AbsoluteProduct).is_err());
    }
}
