//! Exact laws of the lift level under Bernoulli measures, used as oracles
//! for the Monte Carlo statistics.

use crate::error::{Error, Result};
use crate::fibre::{corridor_partition_with, CorridorOptions, CorridorTable, Tilt};
use crate::pressure::GibbsMeasure;
use crate::symbolic::CylinderPotential;

use super::{check_steps, RecurrenceConfig};

/// Support probabilities and steps of a depth-1 measure and step potential.
fn bernoulli_steps(mu: &GibbsMeasure, psi: &CylinderPotential) -> Result<(Vec<f64>, Vec<i64>)> {
    if mu.depth() != 1 || psi.depth() != 1 {
        return Err(Error::Depth("exact level laws need a Bernoulli measure and depth-1 steps".into()));
    }
    if mu.alphabet_size() != psi.alphabet_size() {
        return Err(Error::Depth("measure and step potential alphabets differ".into()));
    }
    let steps = check_steps(psi)?;
    let probs = mu.transition.clone();
    let support_steps = mu.symbols().iter().map(|&s| steps[s]).collect();
    Ok((probs, support_steps))
}

/// Law of `S_nψ` under a Bernoulli measure, as a corridor table with an
/// unbounded corridor. `final_levels` holds log-probabilities.
pub fn exact_level_distribution(
    mu: &GibbsMeasure,
    psi: &CylinderPotential,
    n: usize,
) -> Result<CorridorTable> {
    let (probs, steps) = bernoulli_steps(mu, psi)?;
    // restrict to the support so that every weight is positive
    let f = CylinderPotential::symbolwise(&probs.iter().map(|p| p.ln()).collect::<Vec<_>>());
    let psi = CylinderPotential::symbolwise(&steps.iter().map(|&m| m as f64).collect::<Vec<_>>());
    let opts = CorridorOptions {
        tilt: Tilt::None,
        ..CorridorOptions::default()
    };
    corridor_partition_with(&f, &psi, 0.0, f64::INFINITY, n, opts)
}

/// Probabilities of the two recurrence proxies, computed exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRecurrence {
    /// `P(|S_j - jα| <= K for some j >= from_fraction · n)`.
    pub recurrent: f64,
    /// `P(|S_j - jα| <= K for all 1 <= j <= n)`.
    pub uniform: f64,
}

/// Dynamic program over levels in which mass entering the corridor during
/// the late window is removed (for the recurrent proxy) and mass leaving it
/// is removed (for the uniform proxy).
pub fn exact_recurrence(
    mu: &GibbsMeasure,
    psi: &CylinderPotential,
    alpha: f64,
    half_width: f64,
    n: usize,
    config: RecurrenceConfig,
) -> Result<ExactRecurrence> {
    let (probs, steps) = bernoulli_steps(mu, psi)?;
    if n == 0 {
        return Err(Error::Validation("horizon must be at least 1".into()));
    }
    let reach = steps.iter().map(|m| m.abs()).max().unwrap_or(0) * n as i64;
    let width = (2 * reach + 1) as usize;
    if width > crate::fibre::WIDTH_CAP {
        return Err(Error::Width {
            width,
            cap: crate::fibre::WIDTH_CAP,
        });
    }
    let idx = |m: i64| (m + reach) as usize;
    let start = config.first_index(n);
    let mut free = vec![0.0; width];
    let mut kept = vec![0.0; width];
    free[idx(0)] = 1.0;
    kept[idx(0)] = 1.0;
    let mut hit = 0.0;
    let mut scratch = vec![0.0; width];
    let step = |row: &mut Vec<f64>, scratch: &mut Vec<f64>, lo: i64, hi: i64| {
        scratch.iter_mut().for_each(|x| *x = 0.0);
        for m in lo..=hi {
            let z = row[idx(m)];
            if z == 0.0 {
                continue;
            }
            for (p, s) in probs.iter().zip(&steps) {
                scratch[idx(m + s)] += z * p;
            }
        }
        std::mem::swap(row, scratch);
    };
    let max_step = reach / n as i64;
    for j in 1..=n {
        let (lo, hi) = (-(j as i64 - 1) * max_step, (j as i64 - 1) * max_step);
        step(&mut free, &mut scratch, lo, hi);
        step(&mut kept, &mut scratch, lo, hi);
        let target = j as f64 * alpha;
        let reach_j = j as i64 * max_step;
        for m in -reach_j..=reach_j {
            let inside = (m as f64 - target).abs() <= half_width;
            if inside && j >= start {
                hit += free[idx(m)];
                free[idx(m)] = 0.0;
            }
            if !inside {
                kept[idx(m)] = 0.0;
            }
        }
    }
    Ok(ExactRecurrence {
        recurrent: hit,
        uniform: kept.iter().sum(),
    })
}
