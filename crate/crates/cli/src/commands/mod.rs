// SPDX-License-Identifier: MIT OR Apache-2.0

pub mod constants;
pub mod critvals;
pub mod simulate;
pub mod study;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cusum_lp::limits::{
    sample_fb, sample_limit_general, truncation_horizon, GeneralLimitConfig, LimitFamily,
    LimitMeta, NullDistribution, RenyiLimitConfig,
};
use cusum_lp::testing::NullSettings;
use serde::Serialize;

use crate::args::Command;
use crate::cache::Cache;
use crate::exit::{CliResult, WithCode, UNWRITABLE_OUTPUT};

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Test(a) => test::run(a),
        Command::Critvals(a) => critvals::run(a),
        Command::Constants(a) => constants::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Study(a) => study::run(a),
    }
}

/// Metadata that fully determines a simulated sample before it is drawn.
fn request_meta(
    family: &LimitFamily,
    settings: &NullSettings,
    seed: u64,
) -> cusum_lp::Result<LimitMeta> {
    let mut meta = LimitMeta::analytic(*family);
    match *family {
        LimitFamily::GeneralWeighted { .. } => meta.grid_size = Some(settings.grid_size),
        LimitFamily::Renyi { p, kappa, .. } => {
            meta.grid_step = Some(settings.grid_step);
            meta.truncation_horizon = Some(truncation_horizon(p, kappa, settings.tail_tol)?);
        }
        LimitFamily::DarlingErdosNormal { .. } => return Ok(meta),
    }
    meta.replications = Some(settings.replications);
    meta.seed = Some(seed);
    Ok(meta)
}

fn simulate(
    family: &LimitFamily,
    settings: &NullSettings,
    seed: u64,
) -> cusum_lp::Result<cusum_lp::limits::LimitSample> {
    match *family {
        LimitFamily::GeneralWeighted { p, weight } => sample_limit_general(&GeneralLimitConfig {
            p,
            weight,
            grid_size: settings.grid_size,
            replications: settings.replications,
            seed,
        }),
        LimitFamily::Renyi {
            p,
            kappa,
            gamma1,
            gamma2,
        } => sample_fb(&RenyiLimitConfig {
            p,
            kappa,
            gamma1,
            gamma2,
            grid_step: settings.grid_step,
            replications: settings.replications,
            tail_tol: settings.tail_tol,
            seed,
        }),
        LimitFamily::DarlingErdosNormal { .. } => unreachable!("analytic null"),
    }
}

/// Null distribution for `family`, reusing the on-disk cache when allowed.
pub fn null_for(
    family: &LimitFamily,
    settings: &NullSettings,
    seed: u64,
    use_cache: bool,
) -> CliResult<(NullDistribution, LimitMeta)> {
    let request = request_meta(family, settings, seed)?;
    if let LimitFamily::DarlingErdosNormal { .. } = family {
        return Ok((NullDistribution::StandardNormal, request));
    }
    let cache = if use_cache { Cache::from_env() } else { None };
    let sample = match cache {
        Some(cache) => match cache.get_or_insert_with(&request, || {
            eprintln!("simulating {} limit draws", settings.replications);
            simulate(family, settings, seed)
        }) {
            Ok((sample, hit)) => {
                if hit {
                    eprintln!("using cached limit sample in {}", cache.dir().display());
                }
                sample
            }
            Err(e) => match e.downcast::<cusum_lp::Error>() {
                Ok(core) => return Err(core.into()),
                Err(other) => {
                    eprintln!("warning: cache unavailable ({other:#}); simulating");
                    simulate(family, settings, seed)?
                }
            },
        },
        None => simulate(family, settings, seed)?,
    };
    let meta = sample.meta().clone();
    Ok((NullDistribution::Simulated(sample), meta))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory.
pub fn write_file(path: &Path, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{file_name}.tmp{}", std::process::id()));
    let result = (|| -> io::Result<()> {
        let mut w = BufWriter::new(File::create(&tmp)?);
        write(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
        .exit_code(UNWRITABLE_OUTPUT)
}

/// Prints `value` as JSON, or writes it to `output`.
pub fn emit_json<T: Serialize>(value: &T, output: Option<&Path>) -> CliResult<()> {
    let text = to_json(value);
    match output {
        Some(path) => write_file(path, |w| w.write_all(text.as_bytes())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .exit_code(UNWRITABLE_OUTPUT)
        }
    }
}
