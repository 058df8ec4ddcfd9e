// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::error::{Error, Result};

/// An observed scalar sample `X_1, ..., X_N` with `N >= 2` finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub const MIN_LEN: usize = 2;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < Self::MIN_LEN {
            return Err(Error::InsufficientData {
                needed: Self::MIN_LEN,
                got: values.len(),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "observation {} is not finite ({v})",
                i + 1
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Residuals about the sample mean.
    ///
    /// The mean is accumulated relative to the first observation, so a
    /// constant series gives residuals that are exactly zero.
    pub fn demeaned(&self) -> Vec<f64> {
        demean(&self.values)
    }

    /// Residuals with each half (split at `floor(N/2)`) demeaned separately.
    pub fn split_half_demeaned(&self) -> Vec<f64> {
        let mid = self.values.len() / 2;
        let mut out = demean(&self.values[..mid]);
        out.extend(demean(&self.values[mid..]));
        out
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

pub(crate) fn demean(values: &[f64]) -> Vec<f64> {
    let Some(&anchor) = values.first() else {
        return Vec::new();
    };
    let shifted: Vec<f64> = values.iter().map(|v| v - anchor).collect();
    let mean = shifted.iter().sum::<f64>() / shifted.len() as f64;
    shifted.into_iter().map(|d| d - mean).collect()
}
