//! Closed-form predictions for random graphs `G(N, 1/2)`.
//!
//! All huge quantities (falling factorials, `2^binom(n,2)`) are handled as
//! base-2 logarithms. Floors that feed the integer windows are flagged when
//! their argument lies within `2^-30` of an integer.

mod phi;

pub use phi::{phi_bound_witness, phi_exact, DisjointSets, PhiBound, PhiResult};

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Distance to an integer below which a floor is reported as ambiguous.
pub const BOUNDARY_TOLERANCE: f64 = 1.0 / (1u64 << 30) as f64;

/// Two-point window for the largest common induced subgraph of two
/// independent `G(N, 1/2)` graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPrediction {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub x: f64,
    pub eps: f64,
    pub lo: i64,
    pub hi: i64,
    pub boundary_flag: bool,
}

impl ThresholdPrediction {
    pub fn contains(&self, size: i64) -> bool {
        (self.lo..=self.hi).contains(&size)
    }
}

/// Containment window for a `G(n, 1/2)` pattern inside a `G(N, 1/2)` target:
/// patterns of size `n_contain` or less are found w.h.p., patterns of size
/// `n_exclude` or more are not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SisPrediction {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub y: f64,
    pub eps: f64,
    pub n_contain: i64,
    pub n_exclude: i64,
    pub boundary_flag: bool,
}

/// Where a pattern size sits relative to a [`SisPrediction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictedSide {
    Contain,
    Exclude,
    InsideWindow,
}

impl PredictedSide {
    pub fn as_str(self) -> &'static str {
        match self {
            PredictedSide::Contain => "contain",
            PredictedSide::Exclude => "exclude",
            PredictedSide::InsideWindow => "inside_window",
        }
    }
}

impl SisPrediction {
    pub fn side(&self, n: i64) -> PredictedSide {
        if n <= self.n_contain {
            PredictedSide::Contain
        } else if n >= self.n_exclude {
            PredictedSide::Exclude
        } else {
            PredictedSide::InsideWindow
        }
    }
}

/// Half-width of both windows: `(4 log2 N)^(-1/2)`.
pub fn window_eps(big_n: u64) -> f64 {
    (4.0 * (big_n as f64).log2()).sqrt().recip()
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < BOUNDARY_TOLERANCE
}

/// `x_N = 4 log2 N - 2 log2 log2 N - 2 log2(4/e) + 1` with its window.
pub fn lcs_threshold(big_n: u64) -> Result<ThresholdPrediction> {
    if big_n < 2 {
        return Err(Error::invalid(format!(
            "lcs_threshold needs N >= 2, got {big_n}"
        )));
    }
    let l = (big_n as f64).log2();
    let x = 4.0 * l - 2.0 * l.log2() - 2.0 * (4.0 / E).log2() + 1.0;
    let eps = window_eps(big_n);
    Ok(ThresholdPrediction {
        big_n,
        x,
        eps,
        lo: (x - eps).floor() as i64,
        hi: (x + eps).floor() as i64,
        boundary_flag: near_integer(x - eps) || near_integer(x + eps),
    })
}

/// `y_N = 2 log2 N + 1` with its window.
pub fn sis_threshold(big_n: u64) -> Result<SisPrediction> {
    if big_n < 2 {
        return Err(Error::invalid(format!(
            "sis_threshold needs N >= 2, got {big_n}"
        )));
    }
    let y = 2.0 * (big_n as f64).log2() + 1.0;
    let eps = window_eps(big_n);
    Ok(SisPrediction {
        big_n,
        y,
        eps,
        n_contain: (y - eps).floor() as i64,
        n_exclude: (y + eps).floor() as i64 + 1,
        boundary_flag: near_integer(y - eps) || near_integer(y + eps),
    })
}

/// Centre of the window in which `G(N, 1/2)` stops containing every graph on
/// `n` vertices: `2 log2 N - 2 log2 log2 N + 2 log2(e/2) + 1`.
pub fn alon_window(big_n: u64) -> Result<f64> {
    if big_n < 4 {
        return Err(Error::invalid(format!(
            "alon_window needs N >= 4, got {big_n}"
        )));
    }
    let l = (big_n as f64).log2();
    Ok(2.0 * l - 2.0 * l.log2() + 2.0 * (E / 2.0).log2() + 1.0)
}

/// `log2` of the falling factorial `(N)_n`.
pub fn log2_falling_factorial(n: u64, big_n: u64) -> Result<f64> {
    if n > big_n {
        return Err(Error::invalid(format!("n = {n} exceeds N = {big_n}")));
    }
    // Neumaier summation; terms are all positive and of similar size.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..n {
        let term = ((big_n - k) as f64).log2();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    Ok(sum + comp)
}

fn binom2(n: u64) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// `log2` of the expected number of ordered tuple pairs `(A, B)` that
/// induce the same graph in two independent `G(N, 1/2)` graphs:
/// `2 log2 (N)_n - binom(n, 2)`.
pub fn log2_expected_pairs(n: u64, big_n: u64) -> Result<f64> {
    Ok(2.0 * log2_falling_factorial(n, big_n)? - binom2(n))
}

/// `log2` of the expected number of ordered induced embeddings of a
/// `G(n, 1/2)` pattern in a `G(N, 1/2)` target: `log2 (N)_n - binom(n, 2)`.
pub fn log2_expected_embeddings(n: u64, big_n: u64) -> Result<f64> {
    Ok(log2_falling_factorial(n, big_n)? - binom2(n))
}

/// The offset `b` in `n = (2 / ln 2) ln N + b`.
pub fn first_moment_offset(n: f64, big_n: u64) -> f64 {
    n - (2.0 / LN_2) * (big_n as f64).ln()
}

/// Markov bound on the probability that a `G(N, 1/2)` target contains an
/// induced copy of a `G(n, 1/2)` pattern: `min(1, N^(1-b) 2^(-b(b-1)/2))`.
pub fn first_moment_bound_sis(n: f64, big_n: u64) -> Result<f64> {
    if big_n < 2 {
        return Err(Error::invalid(format!(
            "first_moment_bound_sis needs N >= 2, got {big_n}"
        )));
    }
    let b = first_moment_offset(n, big_n);
    let log2_bound = (1.0 - b) * (big_n as f64).log2() - b * (b - 1.0) / 2.0;
    Ok(log2_bound.exp2().min(1.0))
}
