//! Monte Carlo engine for deviation probabilities and estimate histograms.
//!
//! Trial `t` at sample size `N` draws from the stream seeded by
//! `split(master_seed, N, t)`; corruption noise uses
//! `derive_seed(trial_seed, CORRUPTION_TAG)`. Estimates therefore depend only
//! on the configuration, never on scheduling, and a clean run and a
//! corrupted run with the same master seed see the same underlying draws.

use serde::{Deserialize, Serialize};

use crate::corrupt::CorruptionModel;
use crate::dist::ProcessSpec;
use crate::error::{Error, Result};
use crate::estim::{Estimate, EstimatorConfig, Workspace};
use crate::functionals::RiskLevel;
use crate::rng::{derive_seed, split, CounterRng};

/// Stream tag separating corruption noise from the data stream.
pub const CORRUPTION_TAG: u64 = 0x636f_7272_7570_7421;

fn default_corruption() -> CorruptionModel {
    CorruptionModel::None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub process: ProcessSpec,
    pub estimator: EstimatorConfig,
    pub alpha: RiskLevel,
    pub sample_sizes: Vec<usize>,
    pub delta: f64,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_corruption")]
    pub corruption: CorruptionModel,
    pub truth: f64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        self.estimator.validate()?;
        self.corruption.validate()?;
        if self.trials == 0 {
            return Err(Error::param("experiment", "trials", "must be at least 1"));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::param(
                "experiment",
                "sample_sizes",
                "must not be empty",
            ));
        }
        if self.sample_sizes[0] == 0 || self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param(
                "experiment",
                "sample_sizes",
                "must be positive and strictly increasing",
            ));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::param(
                "experiment",
                "delta",
                format!("must be positive, got {}", self.delta),
            ));
        }
        if !self.truth.is_finite() {
            return Err(Error::param("experiment", "truth", "must be finite"));
        }
        Ok(())
    }
}

/// How trials are scheduled. Results are identical for every choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// Work-stealing pool; `workers == 0` uses the global pool. Runs
    /// sequentially when the crate is built without the `parallel` feature.
    Parallel {
        workers: usize,
    },
}

impl Default for Executor {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Executor::Parallel { workers: 0 }
        } else {
            Executor::Sequential
        }
    }
}

impl Executor {
    pub fn with_workers(workers: usize) -> Self {
        if workers == 1 {
            Executor::Sequential
        } else {
            Executor::Parallel { workers }
        }
    }

    /// Evaluates `f(t, state)` for `t` in `0..trials`, returning results in
    /// trial order. `init` builds per-worker state.
    fn map_trials<S, T, I, F>(&self, trials: usize, init: I, f: F) -> Result<Vec<T>>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(u64, &mut S) -> Result<T> + Sync + Send,
    {
        match *self {
            Executor::Sequential => sequential(trials, init, f),
            Executor::Parallel { workers } => parallel(workers, trials, init, f),
        }
    }
}

fn sequential<S, T, I, F>(trials: usize, init: I, f: F) -> Result<Vec<T>>
where
    I: Fn() -> S,
    F: Fn(u64, &mut S) -> Result<T>,
{
    let mut state = init();
    (0..trials as u64).map(|t| f(t, &mut state)).collect()
}

#[cfg(feature = "parallel")]
fn parallel<S, T, I, F>(workers: usize, trials: usize, init: I, f: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(u64, &mut S) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    let run = || -> Vec<Result<T>> {
        (0..trials as u64)
            .into_par_iter()
            .map_init(&init, |state, t| f(t, state))
            .collect()
    };
    let results = if workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?
            .install(run)
    };
    // Ordered collection reports the lowest failing trial.
    results.into_iter().collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel<S, T, I, F>(_workers: usize, trials: usize, init: I, f: F) -> Result<Vec<T>>
where
    I: Fn() -> S,
    F: Fn(u64, &mut S) -> Result<T>,
{
    sequential(trials, init, f)
}

#[derive(Default)]
struct TrialState {
    data: Vec<f64>,
    indices: Vec<usize>,
    workspace: Workspace,
}

/// Draws, corrupts and estimates one trial for every estimator.
fn one_trial(
    spec: &ExperimentSpec,
    estimators: &[EstimatorConfig],
    n: usize,
    trial: u64,
    state: &mut TrialState,
) -> Result<Vec<Estimate>> {
    let seed = split(spec.master_seed, n as u64, trial);
    state.data.resize(n, 0.0);
    spec.process
        .fill(&mut state.data, &mut CounterRng::new(seed));
    spec.corruption.apply_in_place(
        &mut state.data,
        derive_seed(seed, CORRUPTION_TAG),
        &mut state.indices,
    )?;
    estimators
        .iter()
        .map(|e| e.estimate_with(&state.data, spec.alpha, &mut state.workspace))
        .collect::<Result<Vec<_>>>()
        .map_err(|source| Error::Trial {
            n,
            trial,
            source: Box::new(source),
        })
}

fn check_run(spec: &ExperimentSpec, estimators: &[EstimatorConfig], n: usize) -> Result<()> {
    spec.validate()?;
    for e in estimators {
        e.validate()?;
    }
    if n == 0 {
        return Err(Error::param("experiment", "N", "must be at least 1"));
    }
    spec.corruption.validate_for(n)
}

/// Estimates and clamp intervals of every trial for several estimators on
/// shared draws; `result[e][t]` belongs to estimator `e`, trial `t`.
pub fn run_trials_detailed(
    spec: &ExperimentSpec,
    estimators: &[EstimatorConfig],
    n: usize,
    executor: Executor,
) -> Result<Vec<Vec<Estimate>>> {
    check_run(spec, estimators, n)?;
    let per_trial = executor.map_trials(spec.trials, TrialState::default, |t, state| {
        one_trial(spec, estimators, n, t, state)
    })?;
    let mut out = vec![Vec::with_capacity(spec.trials); estimators.len()];
    for row in per_trial {
        for (column, estimate) in out.iter_mut().zip(row) {
            column.push(estimate);
        }
    }
    Ok(out)
}

/// Estimates of several estimators on shared draws.
pub fn run_trials_multi(
    spec: &ExperimentSpec,
    estimators: &[EstimatorConfig],
    n: usize,
    executor: Executor,
) -> Result<Vec<Vec<f64>>> {
    check_run(spec, estimators, n)?;
    if estimators.len() == 1 {
        let estimator = estimators[0];
        let values = executor.map_trials(spec.trials, TrialState::default, |t, state| {
            Ok(one_trial(spec, &[estimator], n, t, state)?[0].value)
        })?;
        return Ok(vec![values]);
    }
    let detailed = run_trials_detailed(spec, estimators, n, executor)?;
    Ok(detailed
        .into_iter()
        .map(|column| column.into_iter().map(|e| e.value).collect())
        .collect())
}

/// One estimate per trial, in trial order.
pub fn run_trials(spec: &ExperimentSpec, n: usize, executor: Executor) -> Result<Vec<f64>> {
    Ok(run_trials_multi(spec, &[spec.estimator], n, executor)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub p_hat: f64,
    pub stderr: f64,
    pub count: usize,
}

/// Fraction of estimates with `|estimate - truth| >= delta`, its binomial
/// standard error and the raw count. The test is written as
/// `e >= truth + delta || e <= truth - delta` so that values built as
/// `truth +- delta` count exactly.
pub fn deviation_probability(estimates: &[f64], truth: f64, delta: f64) -> Deviation {
    let count = estimates
        .iter()
        .filter(|&&e| e >= truth + delta || e <= truth - delta)
        .count();
    let trials = estimates.len() as f64;
    let p_hat = count as f64 / trials;
    Deviation {
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / trials).sqrt(),
        count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub p_hat: f64,
    pub stderr: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationCurve {
    pub trials: usize,
    pub points: Vec<CurvePoint>,
}

/// Deviation curves for several estimators over `spec.sample_sizes`, on
/// shared draws.
pub fn deviation_curves(
    spec: &ExperimentSpec,
    estimators: &[EstimatorConfig],
    executor: Executor,
) -> Result<Vec<DeviationCurve>> {
    let mut curves = vec![
        DeviationCurve {
            trials: spec.trials,
            points: Vec::with_capacity(spec.sample_sizes.len()),
        };
        estimators.len()
    ];
    for &n in &spec.sample_sizes {
        let columns = run_trials_multi(spec, estimators, n, executor)?;
        for (curve, estimates) in curves.iter_mut().zip(&columns) {
            let d = deviation_probability(estimates, spec.truth, spec.delta);
            curve.points.push(CurvePoint {
                n,
                p_hat: d.p_hat,
                stderr: d.stderr,
                count: d.count,
            });
        }
    }
    Ok(curves)
}

pub fn deviation_curve(spec: &ExperimentSpec, executor: Executor) -> Result<DeviationCurve> {
    Ok(deviation_curves(spec, &[spec.estimator], executor)?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramResult {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub min: f64,
    pub max: f64,
    pub trials: usize,
}

/// Equal-width histogram over `[min, max]` of the data.
pub fn histogram(estimates: &[f64], bins: usize) -> Result<HistogramResult> {
    check_histogram_input(estimates, bins)?;
    let (lo, hi) = estimates
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    histogram_with_range(estimates, bins, lo, hi)
}

fn check_histogram_input(estimates: &[f64], bins: usize) -> Result<()> {
    if bins == 0 {
        return Err(Error::param("histogram", "bins", "must be at least 1"));
    }
    if estimates.is_empty() {
        return Err(Error::EmptySample);
    }
    match estimates.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteValue { index }),
        None => Ok(()),
    }
}

/// Equal-width histogram over `[lo, hi]`. Bins are `[e_i, e_(i+1))` except
/// the last, which also holds `hi`; values outside the range are counted in
/// the end bins. A degenerate range is widened to `[lo - 0.5, hi + 0.5]`.
pub fn histogram_with_range(
    estimates: &[f64],
    bins: usize,
    lo: f64,
    hi: f64,
) -> Result<HistogramResult> {
    check_histogram_input(estimates, bins)?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::param(
            "histogram",
            "range",
            format!("invalid range [{lo}, {hi}]"),
        ));
    }
    let (min, max) = estimates
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let (lo, hi) = if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    let width = (hi - lo) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    bin_edges.push(hi);
    let interior = &bin_edges[1..bins];
    let mut counts = vec![0usize; bins];
    for &x in estimates {
        counts[interior.partition_point(|&e| e <= x)] += 1;
    }
    Ok(HistogramResult {
        bin_edges,
        counts,
        min,
        max,
        trials: estimates.len(),
    })
}

/// Total variation distance between the bin frequencies of two histograms
/// with identical edges.
pub fn total_variation(a: &HistogramResult, b: &HistogramResult) -> Result<f64> {
    if a.bin_edges != b.bin_edges {
        return Err(Error::Config(
            "total variation needs identical bin edges".into(),
        ));
    }
    let (ta, tb) = (a.trials as f64, b.trials as f64);
    Ok(0.5
        * a.counts
            .iter()
            .zip(&b.counts)
            .map(|(&x, &y)| (x as f64 / ta - y as f64 / tb).abs())
            .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongRunSigma {
    /// Batch-means estimate of the long-run variance.
    pub value: f64,
    /// Approximate standard error, `value * sqrt(2 / (blocks - 1))`.
    pub stderr: f64,
}

/// Batch-means long-run variance of the plug-in ES: the plug-in on `blocks`
/// consecutive stretches of one path, scaled as `block_size * var`.
pub fn longrun_sigma_oracle(
    process: &ProcessSpec,
    alpha: RiskLevel,
    block_size: usize,
    blocks: usize,
    seed: u64,
) -> Result<LongRunSigma> {
    process.validate()?;
    if blocks < 2 {
        return Err(Error::param(
            "long-run variance",
            "blocks",
            format!("need at least 2, got {blocks}"),
        ));
    }
    if block_size < 2 {
        return Err(Error::param(
            "long-run variance",
            "block_size",
            format!("need at least 2, got {block_size}"),
        ));
    }
    if block_size < 10_000 || blocks < 100 {
        log::warn!("long-run variance with {blocks} blocks of {block_size} may be unreliable");
    }
    let total = block_size
        .checked_mul(blocks)
        .ok_or_else(|| Error::param("long-run variance", "blocks", "path length overflows"))?;
    let mut path = vec![0.0; total];
    process.fill(&mut path, &mut CounterRng::new(seed));
    let plugin = EstimatorConfig::PlugIn;
    let mut ws = Workspace::default();
    let estimates = path
        .chunks_exact(block_size)
        .map(|chunk| plugin.estimate_with(chunk, alpha, &mut ws).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    let mean = estimates.iter().sum::<f64>() / blocks as f64;
    let var = estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (blocks - 1) as f64;
    let value = block_size as f64 * var;
    Ok(LongRunSigma {
        value,
        stderr: value * (2.0 / (blocks - 1) as f64).sqrt(),
    })
}
