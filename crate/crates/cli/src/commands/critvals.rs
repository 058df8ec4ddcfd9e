// SPDX-License-Identifier: MIT OR Apache-2.0

use cusum_lp::limits::{CriticalValueRow, CriticalValueTable, LimitFamily, DEFAULT_ALPHAS};
use cusum_lp::testing::StatisticSpec;
use serde::Serialize;

use super::{emit_json, null_for, write_file};
use crate::args::{CritvalsArgs, FamilyArg};
use crate::exit::{CliResult, Failure};

/// Limit replications when `--reps` is not given.
pub const DEFAULT_REPS: usize = 100_000;

#[derive(Serialize)]
struct Summary<'a> {
    output: String,
    family: &'a LimitFamily,
    rows: &'a [CriticalValueRow],
}

fn limit_family(args: &CritvalsArgs) -> CliResult<LimitFamily> {
    let s = &args.statistic;
    match (s.family, args.gamma1, args.gamma2) {
        (FamilyArg::Renyi, Some(gamma1), Some(gamma2)) => {
            let kappa = s
                .kappa
                .ok_or_else(|| Failure::parse("--family renyi requires --kappa"))?;
            if !(gamma1 > 0.0 && gamma2 > 0.0 && gamma1.is_finite() && gamma2.is_finite()) {
                return Err(Failure::parse("--gamma1 and --gamma2 must be finite and > 0"));
            }
            // Checks p and kappa without needing a trimming interval.
            StatisticSpec::Renyi {
                p: s.p,
                kappa,
                t1: 0.25,
                t2: 0.75,
            }
            .validate()?;
            Ok(LimitFamily::Renyi {
                p: s.p,
                kappa,
                gamma1,
                gamma2,
            })
        }
        (_, Some(_), _) | (_, _, Some(_)) => Err(Failure::parse(
            "--gamma1/--gamma2 apply only to --family renyi",
        )),
        _ => Ok(s.spec()?.limit_family()),
    }
}

pub fn run(args: CritvalsArgs) -> CliResult<()> {
    let family = limit_family(&args)?;
    let alphas = args.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Failure::parse(format!("alpha must lie in (0, 1); got {a}")));
    }
    let settings = args.simulation.settings(DEFAULT_REPS);
    let (null, meta) = null_for(
        &family,
        &settings,
        args.simulation.seed,
        !args.simulation.no_cache,
    )?;
    let table = CriticalValueTable::from_null(&null, meta, &alphas)?;
    write_file(&args.output, |w| {
        table.write_to(w).map_err(|e| match e {
            cusum_lp::Error::Io(io) => io,
            other => std::io::Error::other(other),
        })
    })?;
    emit_json(
        &Summary {
            output: args.output.display().to_string(),
            family: &family,
            rows: &table.rows,
        },
        None,
    )
}
