// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fs;

use cusum_lp::study::{run_study_with_null, StudyConfig};
use serde::Serialize;

use super::{emit_json, null_for};
use crate::args::StudyArgs;
use crate::exit::{CliResult, WithCode, PARSE};

#[derive(Serialize)]
struct Summary {
    output: String,
    rejections: usize,
    rejection_rate: f64,
    standard_error: f64,
    critical_value: f64,
}

pub fn run(args: StudyArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", args.config.display()))
        .exit_code(PARSE)?;
    let mut config: StudyConfig = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("parsing {}: {e}", args.config.display()))
        .exit_code(PARSE)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(reps) = args.reps {
        config.replications = reps;
    }
    config.validate()?;
    let (null, meta) = null_for(
        &config.statistic.limit_family(),
        &config.null,
        config.seed,
        true,
    )?;
    let report = run_study_with_null(&config, &null, meta)?;
    match &args.output {
        None => emit_json(&report, None),
        Some(path) => {
            emit_json(&report, Some(path))?;
            emit_json(
                &Summary {
                    output: path.display().to_string(),
                    rejections: report.rejections,
                    rejection_rate: report.rejection_rate,
                    standard_error: report.standard_error,
                    critical_value: report.critical_value,
                },
                None,
            )
        }
    }
}
