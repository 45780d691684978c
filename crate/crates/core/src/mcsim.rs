//! Deterministic Monte Carlo sampling of R.
//!
//! Replication `j` draws from its own ChaCha8 stream keyed by `(seed, j)`
//! and normals come from the `rand_distr` ziggurat sampler, so every
//! replication is reproducible on its own. Replications may run in parallel;
//! results are gathered in replication order and reduced sequentially, which
//! makes the summary independent of the worker count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::conc::{coverage_interval, Interval, TailBoundKind};
use crate::error::{domain, Error, Result};
use crate::params::ModelParams;

/// Replications handed to a worker at a time.
const CHUNK: usize = 1024;

/// Retries with a shifted stream when a sample has zero variance.
const MAX_RESAMPLES: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl SimConfig {
    pub fn new(params: ModelParams, reps: usize, seed: u64, alpha: f64) -> Result<Self> {
        if reps < 2 {
            return Err(domain(format!("need at least 2 replications, got {reps}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(Self {
            params,
            reps,
            seed,
            alpha,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSummary {
    pub mean_r: f64,
    /// Sample standard deviation with divisor reps − 1.
    pub sd_r: f64,
    /// Fraction of replications inside each sub-Gaussian coverage interval.
    pub coverage: BTreeMap<TailBoundKind, f64>,
    pub intervals: BTreeMap<TailBoundKind, Interval>,
    pub reps: usize,
    pub seed: u64,
}

/// The RNG for replication `j`, optionally shifted for a resample attempt.
pub fn replication_rng(seed: u64, j: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(j | (attempt << 48));
    rng
}

/// n pairs with unit marginals: X ~ N(0, 1), Y = ρX + √(1 − ρ²) Z.
pub fn sample_bivariate<R: Rng + ?Sized>(params: &ModelParams, n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let rho = params.rho();
    let scale = params.one_minus_rho_sq().sqrt();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        xs.push(x);
        ys.push(rho * x + scale * z);
    }
    (xs, ys)
}

/// Pearson correlation with squared deviations in the denominator.
pub fn sample_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(domain(format!("length mismatch: {} vs {}", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(domain(format!("need at least 3 pairs, got {}", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

fn replicate(params: &ModelParams, seed: u64, j: u64) -> Result<f64> {
    let n = params.n() as usize;
    for attempt in 0..MAX_RESAMPLES {
        let mut rng = replication_rng(seed, j, attempt);
        let (xs, ys) = sample_bivariate(params, n, &mut rng);
        match sample_correlation(&xs, &ys) {
            Err(Error::UndefinedCorrelation) => continue,
            other => return other,
        }
    }
    Err(Error::UndefinedCorrelation)
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| domain(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// `reps` draws of R in replication order. `workers = None` uses the global pool.
pub fn simulate_correlations(params: &ModelParams, reps: usize, seed: u64, workers: Option<usize>) -> Result<Vec<f64>> {
    in_pool(workers, || {
        (0..reps)
            .into_par_iter()
            .with_min_len(CHUNK)
            .map(|j| replicate(params, seed, j as u64))
            .collect::<Result<Vec<f64>>>()
    })?
}

/// Fraction of `values` inside the closed raw interval.
pub fn coverage_rate(values: &[f64], interval: &Interval) -> Result<f64> {
    if values.is_empty() {
        return Err(domain("coverage of an empty sample"));
    }
    let inside = values.iter().filter(|&&r| interval.contains(r)).count();
    Ok(inside as f64 / values.len() as f64)
}

/// Sequential mean and sd (divisor len − 1).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|r| (r - mean) * (r - mean)).sum();
    let sd = if values.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, sd)
}

pub fn run_experiment(cfg: &SimConfig) -> Result<SimSummary> {
    run_experiment_with_workers(cfg, None)
}

pub fn run_experiment_with_workers(cfg: &SimConfig, workers: Option<usize>) -> Result<SimSummary> {
    let values = simulate_correlations(&cfg.params, cfg.reps, cfg.seed, workers)?;
    let (mean_r, sd_r) = mean_sd(&values);
    let mut coverage = BTreeMap::new();
    let mut intervals = BTreeMap::new();
    for kind in TailBoundKind::SUB_GAUSSIAN {
        let iv = coverage_interval(kind, &cfg.params, cfg.alpha)?;
        coverage.insert(kind, coverage_rate(&values, &iv)?);
        intervals.insert(kind, iv);
    }
    Ok(SimSummary {
        mean_r,
        sd_r,
        coverage,
        intervals,
        reps: cfg.reps,
        seed: cfg.seed,
    })
}
