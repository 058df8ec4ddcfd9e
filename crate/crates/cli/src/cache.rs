// SPDX-License-Identifier: MIT OR Apache-2.0

//! On-disk cache of simulated limit samples.
//!
//! Entries are keyed by the requested limit family, simulation settings,
//! seed and tool version, and are read and written while holding an
//! exclusive lock on `<dir>/.lock`.

use std::env;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cusum_lp::limits::{LimitMeta, LimitSample};
use serde_json::Value;

pub const CACHE_DIR_ENV: &str = "CUSUM_LP_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = env::var_os(CACHE_DIR_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("cusum-lp"));
    }
    env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cusum-lp"))
}

fn flatten_key(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<_> = map.keys().collect();
            keys.sort();
            for k in keys {
                let name = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_key(&name, &map[k], out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}={s}")),
        other => out.push(format!("{prefix}={other}")),
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '.' | '=' | '-' | '_' | '+' => c,
            _ => '-',
        })
        .collect()
}

/// Fields of `meta` that determine a sample before it is drawn.
fn same_request(a: &LimitMeta, b: &LimitMeta) -> bool {
    a.family == b.family
        && a.grid_size == b.grid_size
        && a.grid_step == b.grid_step
        && a.replications == b.replications
        && a.seed == b.seed
        && a.truncation_horizon == b.truncation_horizon
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache in `$CUSUM_LP_CACHE_DIR`, falling back to the user cache
    /// directory.
    pub fn from_env() -> Option<Self> {
        default_dir().map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Human-readable file name for a request.
    pub fn file_name(request: &LimitMeta) -> String {
        let value = serde_json::to_value(request).expect("metadata serializes");
        let mut parts = Vec::new();
        flatten_key("", &value, &mut parts);
        parts.push(format!("v{}", cusum_lp::TOOL_VERSION));
        format!("{}.sample", sanitize(&parts.join("_")))
    }

    /// Returns the cached sample for `request`, or draws it with `simulate`
    /// and stores it. The flag is true on a cache hit.
    pub fn get_or_insert_with<F>(
        &self,
        request: &LimitMeta,
        simulate: F,
    ) -> Result<(LimitSample, bool)>
    where
        F: FnOnce() -> cusum_lp::Result<LimitSample>,
    {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating cache directory {}", self.dir.display()))?;
        let lock = File::options()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))
            .context("opening cache lock file")?;
        lock.lock().context("locking cache directory")?;

        let path = self.dir.join(Self::file_name(request));
        if let Ok(f) = File::open(&path) {
            match LimitSample::read_from(BufReader::new(f)) {
                Ok(s) if same_request(s.meta(), request) => return Ok((s, true)),
                Ok(_) => eprintln!(
                    "warning: cache entry {} does not match its key; regenerating",
                    path.display()
                ),
                Err(e) => eprintln!(
                    "warning: unreadable cache entry {} ({e}); regenerating",
                    path.display()
                ),
            }
        }
        let sample = simulate()?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let write = || -> Result<()> {
            sample.write_to(BufWriter::new(File::create(&tmp)?))?;
            fs::rename(&tmp, &path)?;
            Ok(())
        };
        if let Err(e) = write() {
            let _ = fs::remove_file(&tmp);
            eprintln!("warning: could not write cache entry {}: {e:#}", path.display());
        }
        Ok((sample, false))
    }
}
