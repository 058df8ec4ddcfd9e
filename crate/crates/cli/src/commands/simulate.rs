// SPDX-License-Identifier: MIT OR Apache-2.0

use cusum_lp::dgp::{generate_series, ChangeSpec, NoiseModel};
use serde::Serialize;

use super::{emit_json, write_file};
use crate::args::{NoiseArg, SimulateArgs};
use crate::exit::{CliResult, Failure};

#[derive(Serialize)]
struct Header<'a> {
    noise: &'a NoiseModel,
    change: &'a ChangeSpec,
    #[serde(rename = "N")]
    n: usize,
    seed: u64,
    tool_version: &'static str,
}

#[derive(Serialize)]
struct Summary<'a> {
    output: String,
    #[serde(flatten)]
    header: Header<'a>,
    true_lrv: Option<f64>,
}

fn need<T>(v: Option<T>, flag: &str, model: &str) -> CliResult<T> {
    v.ok_or_else(|| Failure::parse(format!("--noise {model} requires {flag}")))
}

fn noise_model(args: &SimulateArgs) -> CliResult<NoiseModel> {
    let s = args.s;
    Ok(match args.noise {
        NoiseArg::IidNormal => NoiseModel::IidNormal { s },
        NoiseArg::StudentT => NoiseModel::IidStudentT {
            df: need(args.df, "--df", "student-t")?,
            scale: s,
        },
        NoiseArg::Ar1 => NoiseModel::Ar1 {
            rho: need(args.rho, "--rho", "ar1")?,
            s,
        },
        NoiseArg::Ma => NoiseModel::Ma {
            coeffs: need(args.ma_coeffs.clone(), "--ma-coeffs", "ma")?,
            s,
        },
        NoiseArg::BernoulliShift => NoiseModel::BernoulliShiftAr {
            a: need(args.a, "--a", "bernoulli-shift")?,
            s,
        },
    })
}

pub fn run(args: SimulateArgs) -> CliResult<()> {
    let noise = noise_model(&args)?;
    let change = ChangeSpec {
        k_star: args.k_star,
        delta: args.delta,
        mu0: args.mu0,
    };
    let series = generate_series(&noise, &change, args.n, args.seed)?;
    let header = Header {
        noise: &noise,
        change: &change,
        n: args.n,
        seed: args.seed,
        tool_version: cusum_lp::TOOL_VERSION,
    };
    let header_json = serde_json::to_string(&header).expect("serializable header");
    write_file(&args.output, |w| {
        writeln!(w, "# {header_json}")?;
        for v in series.values() {
            writeln!(w, "{v}")?;
        }
        Ok(())
    })?;
    emit_json(
        &Summary {
            output: args.output.display().to_string(),
            true_lrv: noise.true_lrv(),
            header,
        },
        None,
    )
}
