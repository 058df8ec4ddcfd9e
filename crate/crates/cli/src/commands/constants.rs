// SPDX-License-Identifier: MIT OR Apache-2.0

use cusum_lp::limits::{compute_b, compute_constants, g_u_mass, AKernel};
use cusum_lp::Error;
use serde::Serialize;

use super::emit_json;
use crate::args::ConstantsArgs;
use crate::exit::{CliResult, Failure, QUADRATURE};

/// What could be computed when `a(p)` misses its accuracy target.
#[derive(Serialize)]
struct Partial {
    p: f64,
    a_p: f64,
    b_p: f64,
    kernel: AKernel,
    quadrature_error_estimate: f64,
    g_u_mass_check: f64,
    converged: bool,
}

pub fn run(args: ConstantsArgs) -> CliResult<()> {
    let kernel = args.a_kernel.into();
    match compute_constants(args.p, kernel) {
        Ok(pair) => emit_json(&pair, None),
        Err(Error::Accuracy {
            value, achieved, ..
        }) => {
            let partial = Partial {
                p: args.p,
                a_p: value,
                b_p: compute_b(args.p),
                kernel,
                quadrature_error_estimate: achieved * value.abs(),
                g_u_mass_check: g_u_mass(1.0, kernel),
                converged: false,
            };
            emit_json(&partial, None)?;
            Err(Failure::new(
                QUADRATURE,
                anyhow::anyhow!(
                    "a(p) reached only relative accuracy {achieved:e}; partial result printed"
                ),
            ))
        }
        Err(e) => Err(e.into()),
    }
}
