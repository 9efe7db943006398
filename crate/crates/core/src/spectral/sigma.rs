//! Density exponent of a set of places and Euler-product tails.
//!
//! For a set of places with residue cardinalities `q_v`,
//! `sigma = limsup_N |{v : q_v <= N}| / ln N`. Only a truncation of the set
//! is ever available, so the estimator returns the whole ratio curve along
//! with its maximum and a trend label.

use num_rational::Rational64;
use serde::Serialize;

use super::tree::{block_test, SeriesVerdict};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Trend {
    /// The ratio falls towards 0 along the grid.
    Decreasing,
    Stable,
    /// The ratio keeps growing: the exponent looks infinite.
    Increasing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub grid: Vec<f64>,
    /// `count(q_v <= N) / ln N` at each grid point.
    pub ratios: Vec<f64>,
    /// Maximum of the ratio curve, a lower bound for the limsup only if
    /// the listed places are all places up to the last grid point.
    pub estimate: f64,
    pub trend: Trend,
}

/// Ratio of the last value to the value at the middle of the grid beyond
/// which the trend is called increasing (or, inverted, decreasing).
pub const TREND_FACTOR: f64 = 1.25;

pub fn sigma_exponent(qs: &[u64], n_grid: &[f64]) -> Result<SigmaEstimate> {
    if qs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("residue cardinalities must be sorted".into()));
    }
    if n_grid.is_empty() || n_grid.iter().any(|n| !(*n > 1.0)) || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("N grid must be increasing and > 1".into()));
    }
    let ratios: Vec<f64> = n_grid
        .iter()
        .map(|&n| {
            let count = qs.partition_point(|&q| q as f64 <= n);
            count as f64 / n.ln()
        })
        .collect();
    let estimate = ratios.iter().copied().fold(0.0, f64::max);
    let last = *ratios.last().unwrap();
    let mid = ratios[ratios.len() / 2];
    let trend = if last > TREND_FACTOR * mid {
        Trend::Increasing
    } else if last * TREND_FACTOR < mid {
        Trend::Decreasing
    } else {
        Trend::Stable
    };
    Ok(SigmaEstimate {
        grid: n_grid.to_vec(),
        ratios,
        estimate,
        trend,
    })
}

/// How the listed places relate to the set they stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlaceList {
    /// The list is the whole (finite) set.
    Complete,
    /// The list is an initial segment of an infinite set.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerTail {
    pub s: f64,
    pub verdict: SeriesVerdict,
    /// `ln prod_{v} (1 - q_v^-s)^-1` over the listed places, when finite.
    pub log_partial_product: Option<f64>,
    /// Block ratio of the dyadic test; `None` when no test was needed.
    pub block_ratio: Option<f64>,
}

/// Convergence of `prod_v (1 - q_v^-s)^-1`.
///
/// For `s <= 0` the factors are infinite or negative and the product
/// diverges. A complete finite list converges for every `s > 0`. For a
/// truncated list the log-factors `-ln(1 - q^-s)` are grouped by dyadic
/// ranges of `q` and the dyadic block test decides.
pub fn euler_tail_check(qs: &[u64], s: f64, list: PlaceList) -> Result<EulerTail> {
    if qs.iter().any(|&q| q < 2) {
        return Err(Error::InvalidArgument("residue cardinalities must be >= 2".into()));
    }
    if s <= 0.0 {
        return Ok(EulerTail {
            s,
            verdict: SeriesVerdict::Diverging,
            log_partial_product: None,
            block_ratio: None,
        });
    }
    let log_factor = |q: u64| -(-(q as f64).powf(-s)).ln_1p();
    let log_partial_product = Some(qs.iter().map(|&q| log_factor(q)).sum());
    if list == PlaceList::Complete {
        return Ok(EulerTail {
            s,
            verdict: SeriesVerdict::Converging,
            log_partial_product,
            block_ratio: None,
        });
    }
    let Some(&top) = qs.last() else {
        return Err(Error::InvalidArgument("a truncated place list must be nonempty".into()));
    };
    // block j collects q in [2^j, 2^(j+1))
    let blocks = 64 - top.leading_zeros() as usize;
    if blocks < 8 {
        return Err(Error::InvalidArgument(
            "truncated place list is too short for the block test".into(),
        ));
    }
    let mut mass = vec![0.0f64; blocks];
    for &q in qs {
        mass[63 - q.leading_zeros() as usize] += log_factor(q);
    }
    let log_mass: Vec<f64> = mass.iter().map(|m| m.ln()).collect();
    let (verdict, ratio) = block_test(&log_mass);
    Ok(EulerTail {
        s,
        verdict,
        log_partial_product,
        block_ratio: Some(ratio),
    })
}

/// `(1 + sigma) * qv_sup`.
pub fn q_s_combine(sigma: Rational64, qv_sup: Rational64) -> Result<Rational64> {
    if sigma < Rational64::from_integer(0) || qv_sup < Rational64::from_integer(2) {
        return Err(Error::InvalidArgument(format!(
            "need sigma >= 0 and q >= 2, got {sigma} and {qv_sup}"
        )));
    }
    Ok((Rational64::from_integer(1) + sigma) * qv_sup)
}

/// Floating-point variant for measured `sigma`.
pub fn q_s_combine_f64(sigma: f64, qv_sup: f64) -> f64 {
    (1.0 + sigma) * qv_sup
}
