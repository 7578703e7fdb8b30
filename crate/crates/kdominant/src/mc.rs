//! Monte Carlo estimation of skyline statistics under the random models.
//!
//! Each trial draws an independent dataset from its own RNG stream (stream t
//! for trial t of the master seed), evaluates one integer statistic on it,
//! and the harness reduces the per-trial values in trial order. Because the
//! streams are fixed by (seed, trial) alone and the reduction is sequential,
//! the output is bit-identical no matter how many worker threads run the
//! trials.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dominance;
use crate::sampler::SamplerConfig;
use crate::{Error, Result};

/// Default ceiling on the estimated comparison count `n^2 * d * trials` of
/// one estimation request. Above it the request is refused so a typo cannot
/// pin a workstation for hours.
pub const DEFAULT_WORK_LIMIT: u128 = 100_000_000_000;

/// A per-dataset integer statistic to average over trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Size of the classical skyline (k = d).
    SkylineCount,
    /// Size of the k-dominant skyline.
    KDominantCount { k: usize },
    /// Number of points dominated by exactly `j` others under k-dominance.
    CloudCell { j: usize, k: usize },
    /// Number of points dominated by at most `j` others under k-dominance.
    CloudCumulative { j: usize, k: usize },
    /// Number of k-dominant cycles through exactly `length` points.
    CycleCount { length: usize, k: usize },
}

impl Statistic {
    pub fn id(&self) -> &'static str {
        match self {
            Statistic::SkylineCount => "skyline-count",
            Statistic::KDominantCount { .. } => "k-dominant-count",
            Statistic::CloudCell { .. } => "cloud-cell",
            Statistic::CloudCumulative { .. } => "cloud-cumulative",
            Statistic::CycleCount { .. } => "cycle-count",
        }
    }

    fn k(&self) -> Option<usize> {
        match self {
            Statistic::SkylineCount => None,
            Statistic::KDominantCount { k }
            | Statistic::CloudCell { k, .. }
            | Statistic::CloudCumulative { k, .. }
            | Statistic::CycleCount { k, .. } => Some(*k),
        }
    }

    fn j(&self) -> Option<usize> {
        match self {
            Statistic::CloudCell { j, .. } | Statistic::CloudCumulative { j, .. } => Some(*j),
            _ => None,
        }
    }

    fn cycle_length(&self) -> Option<usize> {
        match self {
            Statistic::CycleCount { length, .. } => Some(*length),
            _ => None,
        }
    }

    /// Check the statistic against the dataset shape before any sampling.
    fn validate(&self, n: usize, d: usize) -> Result<()> {
        if let Some(k) = self.k() {
            if k < 1 || k > d {
                return Err(Error::KOutOfRange { k, d });
            }
        }
        if let Some(length) = self.cycle_length() {
            if length < 2 || length > n {
                return Err(Error::InvalidParameter(format!(
                    "cycle length must be between 2 and n = {n}, got {length}"
                )));
            }
        }
        Ok(())
    }

    /// Evaluate the statistic on one dataset. `cycle_work_limit` only
    /// applies to the cycle search, whose cost is data-dependent.
    fn eval(&self, ds: &crate::data::Dataset, cycle_work_limit: u128) -> Result<f64> {
        let v = match *self {
            Statistic::SkylineCount => dominance::skyline(ds).len(),
            Statistic::KDominantCount { k } => dominance::k_dominant_skyline(ds, k)?.len(),
            Statistic::CloudCell { j, k } => dominance::dominator_histogram(ds, k)?.cell(j),
            Statistic::CloudCumulative { j, k } => {
                dominance::dominator_histogram(ds, k)?.cumulative(j)
            }
            Statistic::CycleCount { length, k } => {
                dominance::count_dominant_cycles(ds, length, k, cycle_work_limit)?.cycles as usize
            }
        };
        Ok(v as f64)
    }
}

/// Knobs of the estimation harness.
#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    /// Refuse requests whose estimated comparison count exceeds this.
    pub work_limit: u128,
    /// Keep the ordered per-trial values in the result (for paired
    /// comparisons across statistics evaluated on the same seed).
    pub keep_values: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            work_limit: DEFAULT_WORK_LIMIT,
            keep_values: false,
        }
    }
}

/// Summary of one Monte Carlo estimation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub statistic: String,
    pub model: String,
    pub n: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_length: Option<usize>,
    pub trials: u64,
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(trials).
    pub stderr: f64,
    /// `mean +- 1.96 * stderr`.
    pub ci95: (f64, f64),
    pub seed: u64,
    /// Per-trial values in trial order, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn summarize(values: &[f64]) -> (f64, f64) {
    let trials = values.len() as f64;
    let mean = values.iter().sum::<f64>() / trials;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let stderr = (ss / (trials - 1.0)).sqrt() / trials.sqrt();
    (mean, stderr)
}

fn check_budget(config: &SamplerConfig, trials: u64, limit: u128) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "at least 2 trials are required, got {trials}"
        )));
    }
    let n = config.n() as u128;
    let needed = n * n * config.dim() as u128 * trials as u128;
    if needed > limit {
        return Err(Error::WorkLimit {
            needed,
            limit,
        });
    }
    Ok(())
}

/// Run the per-trial evaluations in parallel and reduce in trial order.
fn run_trials<T: Send>(
    config: &SamplerConfig,
    trials: u64,
    eval: impl Fn(&crate::data::Dataset) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..trials)
        .into_par_iter()
        .map(|t| eval(&config.sample_stream(t)))
        .collect::<Vec<Result<T>>>()
        .into_iter()
        .collect()
}

/// Estimate the mean of `statistic` over independent datasets drawn from
/// `config`, one RNG stream per trial. The result is identical for any
/// worker count.
pub fn estimate(
    statistic: Statistic,
    config: &SamplerConfig,
    trials: u64,
) -> Result<EstimateResult> {
    estimate_with(statistic, config, trials, EstimateOptions::default())
}

/// [`estimate`] with an explicit work ceiling and value retention.
pub fn estimate_with(
    statistic: Statistic,
    config: &SamplerConfig,
    trials: u64,
    options: EstimateOptions,
) -> Result<EstimateResult> {
    check_budget(config, trials, options.work_limit)?;
    statistic.validate(config.n(), config.dim())?;
    // The n^2 d budget does not model the cycle search, which can blow up
    // combinatorially; give each trial its share of the global ceiling.
    let cycle_limit = options.work_limit / trials as u128;
    let values = run_trials(config, trials, |ds| statistic.eval(ds, cycle_limit))?;
    let (mean, stderr) = summarize(&values);
    Ok(EstimateResult {
        statistic: statistic.id().to_string(),
        model: config.model().to_string(),
        n: config.n(),
        d: config.dim(),
        k: statistic.k(),
        j: statistic.j(),
        cycle_length: statistic.cycle_length(),
        trials,
        mean,
        stderr,
        ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
        seed: config.seed(),
        values: options.keep_values.then_some(values),
    })
}

/// One point of a cumulative dominator curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    /// Dominator-count cutoff: the row averages the number of points
    /// dominated by at most `m` others.
    pub m: usize,
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

/// Mean number of points with at most m dominators (under k-dominance), for
/// every m in `m_grid`, sharing one histogram pass per trial. Nondecreasing
/// in m within every trial, hence also in the means; at `m = n - 1` every
/// point qualifies and the row is exactly n with zero spread.
pub fn cumulative_cloud_curve(
    config: &SamplerConfig,
    k: usize,
    m_grid: &[usize],
    trials: u64,
    options: EstimateOptions,
) -> Result<Vec<CurveRow>> {
    check_budget(config, trials, options.work_limit)?;
    Statistic::KDominantCount { k }.validate(config.n(), config.dim())?;
    let per_trial = run_trials(config, trials, |ds| {
        let hist = dominance::dominator_histogram(ds, k)?;
        Ok(m_grid
            .iter()
            .map(|&m| hist.cumulative(m) as f64)
            .collect::<Vec<f64>>())
    })?;
    let rows = m_grid
        .iter()
        .enumerate()
        .map(|(idx, &m)| {
            let column: Vec<f64> = per_trial.iter().map(|row| row[idx]).collect();
            let (mean, stderr) = summarize(&column);
            CurveRow {
                m,
                mean,
                stderr,
                ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            }
        })
        .collect();
    Ok(rows)
}

/// Empirical distribution of an integer statistic over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    /// Observed value -> number of trials that produced it.
    pub counts: BTreeMap<u64, u64>,
    pub trials: u64,
}

impl EmpiricalDistribution {
    /// Fraction of trials that produced `v`.
    pub fn proportion(&self, v: u64) -> f64 {
        *self.counts.get(&v).unwrap_or(&0) as f64 / self.trials as f64
    }

    /// Total variation distance to a reference distribution given by its
    /// probabilities on `0..pmf.len()`; mass outside that range is treated
    /// as reference probability zero.
    pub fn total_variation(&self, pmf: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (v, p) in pmf.iter().enumerate() {
            sum += (self.proportion(v as u64) - p).abs();
        }
        for (&v, &c) in &self.counts {
            if v as usize >= pmf.len() {
                sum += c as f64 / self.trials as f64;
            }
        }
        sum / 2.0
    }
}

/// Tally how often each value of the statistic occurs across trials.
pub fn distribution_histogram(
    statistic: Statistic,
    config: &SamplerConfig,
    trials: u64,
    options: EstimateOptions,
) -> Result<EmpiricalDistribution> {
    check_budget(config, trials, options.work_limit)?;
    statistic.validate(config.n(), config.dim())?;
    let cycle_limit = options.work_limit / trials as u128;
    let values = run_trials(config, trials, |ds| statistic.eval(ds, cycle_limit))?;
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry(v as u64).or_insert(0u64) += 1;
    }
    Ok(EmpiricalDistribution { counts, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::sampler::Model;

    fn cfg(model: Model, n: usize, seed: u64) -> SamplerConfig {
        SamplerConfig::new(model, n, seed).unwrap()
    }

    #[test]
    fn categorical_skyline_mean_matches_exact() {
        let config = cfg(Model::Categorical { levels: vec![2, 2] }, 2, 41);
        let r = estimate(Statistic::KDominantCount { k: 1 }, &config, 4000).unwrap();
        let exact = exact::categorical_mean(2, 1, &[2, 2]).unwrap().to_f64();
        assert!((exact - 1.125).abs() < 1e-12);
        assert!(
            (r.mean - exact).abs() <= 4.0 * r.stderr,
            "mean {} vs exact {exact} (stderr {})",
            r.mean,
            r.stderr
        );
    }

    #[test]
    fn one_dominant_count_matches_point_mass() {
        let config = cfg(Model::Hypercube { d: 2 }, 50, 7);
        let r = estimate(Statistic::KDominantCount { k: 1 }, &config, 2000).unwrap();
        assert!(
            (r.mean - 0.02).abs() <= 4.0 * r.stderr.max(1e-4),
            "mean {} (stderr {})",
            r.mean,
            r.stderr
        );
    }

    #[test]
    fn pair_cycle_count_matches_exact_mean() {
        let config = cfg(Model::Hypercube { d: 2 }, 50, 11);
        let r = estimate(
            Statistic::CycleCount { length: 2, k: 1 },
            &config,
            500,
        )
        .unwrap();
        // Exact mean: half of the binom(50, 2) pairs.
        assert!(
            (r.mean - 612.5).abs() <= 3.0 * r.stderr,
            "mean {} (stderr {})",
            r.mean,
            r.stderr
        );
        assert_eq!(r.cycle_length, Some(2));
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let config = cfg(Model::Hypercube { d: 3 }, 64, 1234);
        let stat = Statistic::SkylineCount;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate(stat, &config, 200).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| estimate(stat, &config, 200).unwrap());
        assert_eq!(single, multi);
    }

    #[test]
    fn repeat_runs_are_bit_identical() {
        let config = cfg(Model::Simplex { d: 3 }, 40, 99);
        let a = estimate(Statistic::SkylineCount, &config, 100).unwrap();
        let b = estimate(Statistic::SkylineCount, &config, 100).unwrap();
        assert_eq!(a, b);
        let other_seed = cfg(Model::Simplex { d: 3 }, 40, 100);
        let c = estimate(Statistic::SkylineCount, &other_seed, 100).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn cumulative_curve_saturates_at_n() {
        let config = cfg(Model::Hypercube { d: 2 }, 30, 5);
        let rows = cumulative_cloud_curve(
            &config,
            2,
            &[0, 1, 5, 29],
            50,
            EstimateOptions::default(),
        )
        .unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].mean >= pair[0].mean, "curve must be nondecreasing");
        }
        let last = rows.last().unwrap();
        assert_eq!(last.mean, 30.0);
        assert_eq!(last.stderr, 0.0);
    }

    #[test]
    fn paired_values_are_monotone_per_trial() {
        let config = cfg(Model::Hypercube { d: 3 }, 25, 17);
        let opts = EstimateOptions {
            keep_values: true,
            ..EstimateOptions::default()
        };
        let lo = estimate_with(Statistic::CloudCumulative { j: 1, k: 3 }, &config, 60, opts)
            .unwrap();
        let hi = estimate_with(Statistic::CloudCumulative { j: 2, k: 3 }, &config, 60, opts)
            .unwrap();
        // Same seed and streams, so trial t saw the same dataset in both runs.
        for (a, b) in lo.values.unwrap().iter().zip(hi.values.unwrap().iter()) {
            assert!(b >= a);
        }
    }

    #[test]
    fn skyline_distribution_tracks_minimum_cell_occupancy() {
        use statrs::distribution::{Binomial, Discrete};
        let config = cfg(Model::Categorical { levels: vec![2, 2] }, 50, 3);
        let dist = distribution_histogram(
            Statistic::SkylineCount,
            &config,
            10_000,
            EstimateOptions::default(),
        )
        .unwrap();
        // With both levels binary, the cell (1,1) dominates everything, so
        // the skyline is its occupancy count whenever it is nonempty.
        let reference = Binomial::new(0.25, 50).unwrap();
        let pmf: Vec<f64> = (0..=50).map(|v| reference.pmf(v)).collect();
        let tv = dist.total_variation(&pmf);
        assert!(tv <= 0.05, "total variation {tv}");
    }

    #[test]
    fn budget_and_validation_errors() {
        let config = cfg(Model::Hypercube { d: 2 }, 100, 1);
        let opts = EstimateOptions {
            work_limit: 10,
            ..EstimateOptions::default()
        };
        assert!(matches!(
            estimate_with(Statistic::SkylineCount, &config, 10, opts),
            Err(Error::WorkLimit { .. })
        ));
        assert!(estimate(Statistic::SkylineCount, &config, 1).is_err());
        assert!(matches!(
            estimate(Statistic::KDominantCount { k: 3 }, &config, 10),
            Err(Error::KOutOfRange { k: 3, d: 2 })
        ));
        assert!(estimate(
            Statistic::CycleCount {
                length: 101,
                k: 1
            },
            &config,
            10
        )
        .is_err());
    }
}
