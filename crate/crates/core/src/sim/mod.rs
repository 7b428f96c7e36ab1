//! Orbit-level experiments: Gibbs-distributed symbol sequences and their
//! lift paths, recurrence statistics, exact level laws and interval-map
//! iteration.
//!
//! # Random streams
//!
//! Orbit `i` of a batch with seed `s` is driven by ChaCha8 seeded with
//! `s` (via `seed_from_u64`) on stream `i`. Each symbol consumes one `f64`
//! drawn uniformly from `[0, 1)` and is chosen by inverse CDF over the
//! support in increasing symbol order; a depth-`k` chain first draws its
//! initial `(k-1)`-word from the stationary law the same way. Orbits are
//! therefore independent of how a batch is scheduled across threads.

mod exact;
mod interval;

pub use exact::{exact_level_distribution, exact_recurrence, ExactRecurrence};
pub use interval::{conjugacy_check, iterate_interval_map, LiftPoint, BOUNDARY_GUARD};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::fibre::corridor_partition;
use crate::pressure::GibbsMeasure;
use crate::symbolic::{word_index, BranchModel, CylinderPotential};

/// Largest number of stored path entries in [`SampleMode::Full`].
pub const FULL_BATCH_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Keep every symbol sequence and lift path in memory.
    Full,
    /// Keep only the final levels; paths are regenerated on demand.
    Summary,
}

/// A reproducible batch of sampled orbits.
#[derive(Debug, Clone)]
pub struct OrbitBatch {
    seed: u64,
    count: usize,
    horizon: usize,
    measure: GibbsMeasure,
    psi: CylinderPotential,
    paths: Option<Vec<Vec<i64>>>,
    finals: Vec<i64>,
}

fn check_steps(psi: &CylinderPotential) -> Result<Vec<i64>> {
    psi.values()
        .iter()
        .map(|&v| {
            if (v - v.round()).abs() > 1e-12 {
                Err(Error::NonIntegerStep(v))
            } else {
                Ok(v.round() as i64)
            }
        })
        .collect()
}

fn pick(rng: &mut ChaCha8Rng, probabilities: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // round-off: the last symbol with positive probability
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Symbols `ω_0 … ω_{len-1}` (global indices) of orbit `index`.
fn sample_symbols(mu: &GibbsMeasure, len: usize, seed: u64, index: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let j = mu.symbols.len();
    let head = mu.depth - 1;
    let mut out = Vec::with_capacity(len.max(head));
    let mut state = pick(&mut rng, &mu.stationary);
    let mut s = state;
    let mut local_head = vec![0; head];
    for slot in local_head.iter_mut().rev() {
        *slot = s % j;
        s /= j;
    }
    out.extend(local_head.iter().map(|&x| mu.symbols[x]));
    while out.len() < len {
        let x = pick(&mut rng, &mu.transition[state * j..(state + 1) * j]);
        out.push(mu.symbols[x]);
        state = mu.next_state(state, x);
    }
    out.truncate(len);
    out
}

impl OrbitBatch {
    fn generate_path(&self, index: usize) -> Vec<i64> {
        lift_path(&self.measure, &self.psi, self.horizon, self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn measure(&self) -> &GibbsMeasure {
        &self.measure
    }

    pub fn is_materialised(&self) -> bool {
        self.paths.is_some()
    }

    /// `S_0ψ = 0, S_1ψ, …, S_nψ` of orbit `index`.
    pub fn path(&self, index: usize) -> Vec<i64> {
        match &self.paths {
            Some(p) => p[index].clone(),
            None => self.generate_path(index),
        }
    }

    /// Symbols of orbit `index` (enough to evaluate every window of `ψ`).
    pub fn symbols(&self, index: usize) -> Vec<usize> {
        sample_symbols(&self.measure, self.horizon + self.psi.depth() - 1, self.seed, index)
    }

    /// `S_nψ` for every orbit.
    pub fn final_levels(&self) -> &[i64] {
        &self.finals
    }

    /// Mean of `S_nψ / n` and its standard error.
    pub fn drift_estimate(&self) -> (f64, f64) {
        let n = self.horizon as f64;
        let xs: Vec<f64> = self.finals.iter().map(|&s| s as f64 / n).collect();
        mean_and_se(&xs)
    }

    /// Applies `f` to every path in parallel, in orbit order.
    pub fn map_paths<T: Send>(&self, f: impl Fn(&[i64]) -> T + Sync) -> Vec<T> {
        match &self.paths {
            Some(p) => p.par_iter().map(|path| f(path)).collect(),
            None => (0..self.count)
                .into_par_iter()
                .map(|i| f(&self.generate_path(i)))
                .collect(),
        }
    }
}

fn lift_path(mu: &GibbsMeasure, psi: &CylinderPotential, n: usize, seed: u64, index: usize) -> Vec<i64> {
    let k = psi.depth();
    let r = psi.alphabet_size();
    let symbols = sample_symbols(mu, n + k - 1, seed, index);
    let mut path = Vec::with_capacity(n + 1);
    let mut level = 0i64;
    path.push(0);
    for window in symbols.windows(k) {
        level += psi.value_at(word_index(window, r)).round() as i64;
        path.push(level);
    }
    path
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Samples `count` orbits of length `n` under `μ` with lift increments
/// given by the integer potential `psi`.
pub fn sample_orbits(
    mu: &GibbsMeasure,
    psi: &CylinderPotential,
    n: usize,
    count: usize,
    seed: u64,
    mode: SampleMode,
) -> Result<OrbitBatch> {
    if mu.alphabet_size() != psi.alphabet_size() {
        return Err(Error::Depth("measure and step potential alphabets differ".into()));
    }
    if n == 0 || count == 0 {
        return Err(Error::Validation("horizon and count must be positive".into()));
    }
    check_steps(psi)?;
    let cells = count.saturating_mul(n + 1);
    if mode == SampleMode::Full && cells > FULL_BATCH_CAP {
        return Err(Error::Budget {
            requested: cells as u128,
            budget: FULL_BATCH_CAP as u128,
        });
    }
    let paths: Vec<Vec<i64>> = match mode {
        SampleMode::Full => (0..count)
            .into_par_iter()
            .map(|i| lift_path(mu, psi, n, seed, i))
            .collect(),
        SampleMode::Summary => Vec::new(),
    };
    let finals = match mode {
        SampleMode::Full => paths.iter().map(|p| p[n]).collect(),
        SampleMode::Summary => (0..count)
            .into_par_iter()
            .map(|i| lift_path(mu, psi, n, seed, i)[n])
            .collect(),
    };
    Ok(OrbitBatch {
        seed,
        count,
        horizon: n,
        measure: mu.clone(),
        psi: psi.clone(),
        paths: (mode == SampleMode::Full).then_some(paths),
        finals,
    })
}

/// Finite-horizon proxies for the tail events "returns infinitely often"
/// and "stays forever".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceConfig {
    /// The recurrent proxy looks for a visit at some `j >= from_fraction · n`.
    pub from_fraction: f64,
}

impl Default for RecurrenceConfig {
    fn default() -> Self {
        Self { from_fraction: 0.5 }
    }
}

impl RecurrenceConfig {
    pub(crate) fn first_index(&self, n: usize) -> usize {
        ((self.from_fraction * n as f64).ceil() as usize).clamp(1, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitFlags {
    /// `|S_j - jα| <= K` for some `j` in the late window (proxy).
    pub recurrent: bool,
    /// `|S_j - jα| <= K` for every `1 <= j <= n` (proxy).
    pub uniform: bool,
    /// `min_{1<=j<=n} |S_j - jα|`.
    pub min_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceStats {
    pub alpha: f64,
    pub half_width: f64,
    pub orbits: Vec<OrbitFlags>,
    pub recurrent_fraction: f64,
    pub recurrent_se: f64,
    pub uniform_fraction: f64,
    pub uniform_se: f64,
}

fn binomial(flags: impl Iterator<Item = bool>, count: usize) -> (f64, f64) {
    let p = flags.filter(|&b| b).count() as f64 / count as f64;
    (p, (p * (1.0 - p) / count as f64).sqrt())
}

pub fn recurrence_statistics(batch: &OrbitBatch, alpha: f64, half_width: f64) -> RecurrenceStats {
    recurrence_statistics_with(batch, alpha, half_width, RecurrenceConfig::default())
}

pub fn recurrence_statistics_with(
    batch: &OrbitBatch,
    alpha: f64,
    half_width: f64,
    config: RecurrenceConfig,
) -> RecurrenceStats {
    let n = batch.horizon();
    let start = config.first_index(n);
    let orbits = batch.map_paths(|path| {
        let mut flags = OrbitFlags {
            recurrent: false,
            uniform: true,
            min_deviation: f64::INFINITY,
        };
        for (j, &s) in path.iter().enumerate().skip(1) {
            let dev = (s as f64 - j as f64 * alpha).abs();
            let inside = dev <= half_width;
            flags.min_deviation = flags.min_deviation.min(dev);
            flags.uniform &= inside;
            flags.recurrent |= inside && j >= start;
        }
        flags
    });
    let count = orbits.len();
    let (recurrent_fraction, recurrent_se) = binomial(orbits.iter().map(|f| f.recurrent), count);
    let (uniform_fraction, uniform_se) = binomial(orbits.iter().map(|f| f.uniform), count);
    RecurrenceStats {
        alpha,
        half_width,
        orbits,
        recurrent_fraction,
        recurrent_se,
        uniform_fraction,
        uniform_se,
    }
}

/// Fraction (with standard error) of orbits that leave `[-r, r]` around
/// `jα` and come back into it by step `horizon`.
pub fn return_fraction(batch: &OrbitBatch, alpha: f64, radius: f64, horizon: usize) -> (f64, f64) {
    let horizon = horizon.min(batch.horizon());
    let flags = batch.map_paths(|path| {
        let mut left = false;
        for (j, &s) in path.iter().enumerate().take(horizon + 1).skip(1) {
            let inside = (s as f64 - j as f64 * alpha).abs() <= radius;
            if !inside {
                left = true;
            } else if left {
                return true;
            }
        }
        false
    });
    binomial(flags.into_iter(), batch.count())
}

/// JSON record of a batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub seed: u64,
    pub n: usize,
    pub count: usize,
    pub measure: String,
    pub drift_hat: f64,
    pub drift_se: f64,
    pub recur_frac: f64,
    pub unif_frac: f64,
}

/// Human readable descriptor of a sampling measure.
pub fn describe_measure(mu: &GibbsMeasure) -> String {
    if mu.is_dirac() {
        return format!("dirac({})", mu.symbols()[0] + 1);
    }
    if mu.depth() == 1 {
        let p: Vec<String> = mu.symbol_marginals().iter().map(|p| format!("{p}")).collect();
        return format!("bernoulli({})", p.join(","));
    }
    format!("markov(depth={})", mu.depth())
}

pub fn summarize(batch: &OrbitBatch, alpha: f64, half_width: f64) -> BatchSummary {
    let (drift_hat, drift_se) = batch.drift_estimate();
    let stats = recurrence_statistics(batch, alpha, half_width);
    BatchSummary {
        seed: batch.seed(),
        n: batch.horizon(),
        count: batch.count(),
        measure: describe_measure(batch.measure()),
        drift_hat,
        drift_se,
        recur_frac: stats.recurrent_fraction,
        unif_frac: stats.uniform_fraction,
    }
}

/// Pearson goodness of fit of the final levels against an exact law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Compares the batch's final levels with `(level, probability)` pairs.
/// Adjacent levels are pooled until every bin expects at least 5 orbits.
pub fn chi_square_levels(batch: &OrbitBatch, law: &[(i64, f64)]) -> Result<ChiSquare> {
    let count = batch.count() as f64;
    let mut law = law.to_vec();
    law.sort_by_key(|(m, _)| *m);
    // pool into bins of expected count >= 5
    let mut edges: Vec<(i64, f64)> = Vec::new();
    let mut acc = 0.0;
    for &(m, p) in &law {
        acc += p * count;
        if acc >= 5.0 {
            edges.push((m, acc));
            acc = 0.0;
        }
    }
    if let Some(last) = edges.last_mut() {
        last.1 += acc;
    }
    if edges.len() < 2 {
        return Err(Error::Validation("too few bins for a chi-square test".into()));
    }
    let last_edge = edges.len() - 1;
    let mut observed = vec![0.0; edges.len()];
    for &s in batch.final_levels() {
        let bin = edges.iter().position(|(m, _)| s <= *m).unwrap_or(last_edge);
        observed[bin] += 1.0;
    }
    let statistic = observed
        .iter()
        .zip(&edges)
        .map(|(o, (_, e))| (o - e).powi(2) / e)
        .sum();
    let dof = edges.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Validation(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

/// `Σ_{ω∈C_n(ψ_α, K)} |π[ω]|^s`, the cylinder cover sum of the escaping set.
pub fn cover_sum(model: &BranchModel, alpha: f64, half_width: f64, n: usize, s: f64) -> Result<f64> {
    Ok(log_cover_sum(model, alpha, half_width, n, s)?.exp())
}

/// Logarithm of [`cover_sum`]; finite far beyond where the sum underflows.
pub fn log_cover_sum(model: &BranchModel, alpha: f64, half_width: f64, n: usize, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Range(format!("exponent {s} must be non-negative")));
    }
    let f = model.geometric_potential().scaled(s);
    Ok(corridor_partition(&f, &model.step_potential(), alpha, half_width, n)?.log_zeta_n())
}
