// SPDX-License-Identifier: MIT OR Apache-2.0

//! Versioned critical-value tables.
//!
//! ```text
//! # {"format":"cusum-lp-critvals/1","tool_version":"0.1.0","family":"general-weighted",...}
//! alpha,critical_value
//! 0.1,0.34731...
//! ```

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::sample::{LimitMeta, NullDistribution};
use crate::error::{Error, Result};

pub const TABLE_FORMAT: &str = "cusum-lp-critvals/1";
pub const DEFAULT_ALPHAS: [f64; 4] = [0.10, 0.05, 0.025, 0.01];
const COLUMNS: &str = "alpha,critical_value";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Header {
    format: String,
    tool_version: String,
    #[serde(flatten)]
    meta: LimitMeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueRow {
    pub alpha: f64,
    pub critical_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueTable {
    pub meta: LimitMeta,
    pub tool_version: String,
    pub rows: Vec<CriticalValueRow>,
}

impl CriticalValueTable {
    /// Rows for `alphas` (kept in the given order).
    pub fn from_null(
        null: &NullDistribution,
        meta: LimitMeta,
        alphas: &[f64],
    ) -> Result<Self> {
        let rows = alphas
            .iter()
            .map(|&alpha| {
                Ok(CriticalValueRow {
                    alpha,
                    critical_value: null.critical_value(alpha)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            meta,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            rows,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Header {
            format: TABLE_FORMAT.to_owned(),
            tool_version: self.tool_version.clone(),
            meta: self.meta.clone(),
        };
        writeln!(w, "# {}", serde_json::to_string(&header)?)?;
        writeln!(w, "{COLUMNS}")?;
        for row in &self.rows {
            writeln!(w, "{},{}", row.alpha, row.critical_value)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::TableFormat("empty table".into()))??;
        let json = first
            .strip_prefix('#')
            .ok_or_else(|| Error::TableFormat("missing '#' header line".into()))?;
        let header: Header = serde_json::from_str(json.trim())?;
        if header.format != TABLE_FORMAT {
            return Err(Error::TableFormat(format!(
                "unsupported format {:?}; expected {TABLE_FORMAT:?}",
                header.format
            )));
        }
        match lines.next().transpose()? {
            Some(cols) if cols.trim() == COLUMNS => {}
            other => {
                return Err(Error::TableFormat(format!(
                    "expected column line {COLUMNS:?}, found {other:?}"
                )))
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |what: &str| Error::TableFormat(format!("row {}: {what}", i + 1));
            let (a, c) = line.split_once(',').ok_or_else(|| bad("expected two columns"))?;
            rows.push(CriticalValueRow {
                alpha: a.trim().parse().map_err(|_| bad("alpha is not a number"))?,
                critical_value: c
                    .trim()
                    .parse()
                    .map_err(|_| bad("critical value is not a number"))?,
            });
        }
        Ok(Self {
            meta: header.meta,
            tool_version: header.tool_version,
            rows,
        })
    }
}
