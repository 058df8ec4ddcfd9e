// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by statistics, estimators and samplers in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("weight (t(1-t))^{q} is not admissible for p = {p}: {reason}")]
    InadmissibleWeight { p: f64, q: f64, reason: String },

    #[error("kappa = {kappa} must exceed p/2 + 1 = {bound} for a finite trimmed limit")]
    DivergentLimit { p: f64, kappa: f64, bound: f64 },

    #[error("invalid trimming interval ({t1}, {t2}) for n = {n}: {reason}")]
    InvalidTrim {
        t1: f64,
        t2: f64,
        n: usize,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid noise model: {0}")]
    InvalidModel(String),

    #[error(
        "quadrature did not reach relative accuracy {requested:e}: \
         value {value} with error estimate {achieved:e}"
    )]
    Accuracy {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("{replications} Monte Carlo replications are too few; need at least {minimum}")]
    Precision { replications: usize, minimum: usize },

    #[error("malformed table: {0}")]
    TableFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "p must be finite and >= 1; got {p}"
        )));
    }
    Ok(())
}
