//! Seeded Monte Carlo trials.
//!
//! Trial `t` draws its two graphs from streams `2t` and `2t + 1` of the
//! master seed, so trials can run on any number of workers in any order and
//! still produce the same records. Records are always returned sorted by
//! trial index.

mod config;
mod report;
mod stats;

pub use config::{parse_config, ExperimentConfig, ExperimentKind, OutputFormat};
pub use report::{write_lcs, write_sis, write_sweep, ReportOptions};
pub use stats::{wilson_interval, Interval, Z_95};

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{SearchBudget, Verdict};
use crate::graph::{gnp_sample, is_induced_isomorphism};
use crate::mcis::max_common_induced_subgraph;
use crate::rng::Seed;
use crate::sis::contains_induced;
use crate::theory::{
    lcs_threshold, sis_threshold, PredictedSide, SisPrediction, ThresholdPrediction,
};
use crate::{Error, Result};

/// Default node budget for one common-subgraph trial.
pub const DEFAULT_LCS_NODES: u64 = 1_000_000_000;
/// Default node budget for one containment trial.
pub const DEFAULT_SIS_NODES: u64 = 100_000_000;
/// Witnesses with more pairs than this are verified and then dropped.
pub const MAX_STORED_WITNESS: usize = 64;
/// A summary with a larger share of unknown trials is inconclusive.
pub const MAX_UNKNOWN_FRACTION: f64 = 0.10;

/// Trial-level execution settings shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub master_seed: u64,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub budget: SearchBudget,
}

fn trial_seeds(master: u64, trial: usize) -> (Seed, Seed) {
    let t = trial as u64;
    (Seed::new(master, 2 * t), Seed::new(master, 2 * t + 1))
}

fn run_pool<T, F>(workers: usize, trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    InWindow,
    BelowBy1,
    AboveBy1,
    Farther,
    Unknown,
}

impl Classification {
    pub fn of(size: usize, optimal: bool, prediction: &ThresholdPrediction) -> Self {
        if !optimal {
            return Classification::Unknown;
        }
        let size = size as i64;
        if prediction.contains(size) {
            Classification::InWindow
        } else if size == prediction.lo - 1 {
            Classification::BelowBy1
        } else if size == prediction.hi + 1 {
            Classification::AboveBy1
        } else {
            Classification::Farther
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::InWindow => "in_window",
            Classification::BelowBy1 => "below_by_1",
            Classification::AboveBy1 => "above_by_1",
            Classification::Farther => "farther",
            Classification::Unknown => "unknown",
        }
    }
}

/// One common-subgraph trial on two independent `G(N, 1/2)` graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcsTrialRecord {
    pub trial_index: usize,
    pub seeds: (Seed, Seed),
    /// The optimum when `optimal`, otherwise a lower bound.
    #[serde(rename = "L")]
    pub size: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub predicted: (i64, i64),
    pub classification: Classification,
    pub witness: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcsSummary {
    pub trials: usize,
    pub optimal: usize,
    pub in_window: usize,
    pub below_by_1: usize,
    pub above_by_1: usize,
    pub farther: usize,
    pub unknown: usize,
    pub min_l: Option<usize>,
    pub max_l: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcsExperiment {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub settings: RunSettings,
    pub prediction: ThresholdPrediction,
    pub records: Vec<LcsTrialRecord>,
    pub summary: LcsSummary,
}

/// Samples `trials` pairs of `G(N, 1/2)` graphs and solves each for its
/// largest common induced subgraph.
pub fn run_lcs_trials(big_n: u64, trials: usize, settings: RunSettings) -> Result<LcsExperiment> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let prediction = lcs_threshold(big_n)?;
    let n = big_n as usize;
    let records = run_pool(settings.workers, trials, |t| {
        let (s1, s2) = trial_seeds(settings.master_seed, t);
        let g1 = gnp_sample(n, 0.5, s1)?;
        let g2 = gnp_sample(n, 0.5, s2)?;
        let r = max_common_induced_subgraph(&g1, &g2, settings.budget);
        if !is_induced_isomorphism(&g1, &g2, &r.mapping)? {
            return Err(Error::PropertyViolation(format!(
                "trial {t}: common-subgraph witness does not verify"
            )));
        }
        Ok(LcsTrialRecord {
            trial_index: t,
            seeds: (s1, s2),
            size: r.size,
            optimal: r.optimal,
            nodes_explored: r.nodes_explored,
            elapsed: r.elapsed,
            predicted: (prediction.lo, prediction.hi),
            classification: Classification::of(r.size, r.optimal, &prediction),
            witness: (r.size <= MAX_STORED_WITNESS).then_some(r.mapping),
        })
    })?;

    let count = |c: Classification| records.iter().filter(|r| r.classification == c).count();
    let optimal_sizes = records.iter().filter(|r| r.optimal).map(|r| r.size);
    let summary = LcsSummary {
        trials,
        optimal: records.iter().filter(|r| r.optimal).count(),
        in_window: count(Classification::InWindow),
        below_by_1: count(Classification::BelowBy1),
        above_by_1: count(Classification::AboveBy1),
        farther: count(Classification::Farther),
        unknown: count(Classification::Unknown),
        min_l: optimal_sizes.clone().min(),
        max_l: optimal_sizes.max(),
    };
    Ok(LcsExperiment {
        big_n,
        settings,
        prediction,
        records,
        summary,
    })
}

/// One containment trial: a `G(n, 1/2)` pattern against a `G(N, 1/2)` target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SisTrialRecord {
    pub trial_index: usize,
    pub seeds: (Seed, Seed),
    pub found: Verdict,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SisExperimentSummary {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub unknowns: usize,
    /// `successes / (trials - unknowns)`; absent if every trial is unknown.
    pub p_hat: Option<f64>,
    pub interval: Option<Interval>,
    pub predicted_side: PredictedSide,
    pub inconclusive: bool,
}

impl SisExperimentSummary {
    fn from_records(n: usize, prediction: &SisPrediction, records: &[SisTrialRecord]) -> Self {
        let count = |v: Verdict| records.iter().filter(|r| r.found == v).count();
        let (successes, failures, unknowns) = (
            count(Verdict::True),
            count(Verdict::False),
            count(Verdict::Unknown),
        );
        let decided = (successes + failures) as u64;
        SisExperimentSummary {
            n,
            big_n: prediction.big_n,
            trials: records.len(),
            successes,
            failures,
            unknowns,
            p_hat: (decided > 0).then(|| successes as f64 / decided as f64),
            interval: wilson_interval(successes as u64, decided, Z_95),
            predicted_side: prediction.side(n as i64),
            inconclusive: unknowns as f64 > MAX_UNKNOWN_FRACTION * records.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SisExperiment {
    pub settings: RunSettings,
    pub prediction: SisPrediction,
    pub records: Vec<SisTrialRecord>,
    pub summary: SisExperimentSummary,
}

/// Estimates the probability that a `G(N, 1/2)` target contains an induced
/// copy of a `G(n, 1/2)` pattern.
pub fn run_sis_trials(
    n: usize,
    big_n: u64,
    trials: usize,
    settings: RunSettings,
) -> Result<SisExperiment> {
    if n == 0 || n as u64 > big_n {
        return Err(Error::invalid(format!(
            "pattern size {n} must be in 1..=N ({big_n})"
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let prediction = sis_threshold(big_n)?;
    let records = run_pool(settings.workers, trials, |t| {
        let (s1, s2) = trial_seeds(settings.master_seed, t);
        let pattern = gnp_sample(n, 0.5, s1)?;
        let target = gnp_sample(big_n as usize, 0.5, s2)?;
        let r = contains_induced(&pattern, &target, settings.budget);
        if let Some(pairs) = r.witness_pairs() {
            if !is_induced_isomorphism(&pattern, &target, &pairs)? {
                return Err(Error::PropertyViolation(format!(
                    "trial {t}: containment witness does not verify"
                )));
            }
        }
        Ok(SisTrialRecord {
            trial_index: t,
            seeds: (s1, s2),
            found: r.found,
            nodes_explored: r.nodes_explored,
            elapsed: r.elapsed,
            witness: r.witness.filter(|w| w.len() <= MAX_STORED_WITNESS),
        })
    })?;
    let summary = SisExperimentSummary::from_records(n, &prediction, &records);
    Ok(SisExperiment {
        settings,
        prediction,
        records,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub prediction: SisPrediction,
    pub experiments: Vec<SisExperiment>,
    /// Largest pattern size whose estimate is at least 1/2.
    pub transition: Option<usize>,
}

/// Runs [`run_sis_trials`] for every pattern size in `n_from..=n_to`.
pub fn sweep_sis_window(
    big_n: u64,
    n_from: usize,
    n_to: usize,
    trials_per_n: usize,
    settings: RunSettings,
) -> Result<SweepReport> {
    if n_from == 0 || n_from > n_to || n_to as u64 > big_n {
        return Err(Error::invalid(format!(
            "pattern range {n_from}..={n_to} must lie within 1..={big_n}"
        )));
    }
    let experiments = (n_from..=n_to)
        .map(|n| run_sis_trials(n, big_n, trials_per_n, settings))
        .collect::<Result<Vec<_>>>()?;
    let transition = experiments
        .iter()
        .filter(|e| e.summary.p_hat.is_some_and(|p| p >= 0.5))
        .map(|e| e.summary.n)
        .max();
    Ok(SweepReport {
        big_n,
        prediction: sis_threshold(big_n)?,
        experiments,
        transition,
    })
}
