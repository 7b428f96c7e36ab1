//! Lattice dynamic program for corridor partition sums.
//!
//! `Z_j(m, a)` is the total weight `exp(S f)` of the words of length `j`
//! whose complete `ψ`-windows sum to the integer level `m` and which end in
//! the `(depth-1)`-word `a`. A word of length `j` lies in the corridor when
//! its `ψ`-sum (tail included) is within `K` of `jα`.

use crate::error::{Error, Result};
use crate::solve::log_sum_exp;
use crate::symbolic::CylinderPotential;

/// Default cap on the number of `(level, state)` cells in one row.
pub const WIDTH_CAP: usize = 1 << 26;

/// Exponential tilt applied to the weights during the recursion.
///
/// Tilting by `q` multiplies each word by `exp(q S ψ)` and divides it back
/// out when a level is read. It changes nothing mathematically but keeps the
/// bulk of each row near the corridor, so sums far in the large-deviation
/// tail do not underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tilt {
    /// Minimiser of `q ↦ 𝔓(f + q(ψ - α))` when `α` is interior, else none.
    Auto,
    None,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorOptions {
    pub tilt: Tilt,
    /// Keep every row, not just the last (memory `n × width`).
    pub keep_rows: bool,
    pub width_cap: usize,
}

impl Default for CorridorOptions {
    fn default() -> Self {
        Self {
            tilt: Tilt::Auto,
            keep_rows: false,
            width_cap: WIDTH_CAP,
        }
    }
}

/// Result of the corridor recursion up to horizon `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorridorTable {
    horizon: usize,
    alpha: f64,
    half_width: f64,
    tilt: f64,
    level_lo: i64,
    level_hi: i64,
    /// `log ζ_j` for `j = 1..=n`; `-∞` for empty corridors and for `j`
    /// shorter than the potential depth.
    log_zeta: Vec<f64>,
    /// Final row as `(level including tail, log weight)`, untilted.
    final_levels: Vec<(i64, f64)>,
    rows: Option<Vec<Vec<(i64, f64)>>>,
}

impl CorridorTable {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Tilt parameter that was used internally.
    pub fn tilt(&self) -> f64 {
        self.tilt
    }

    /// Range of integer levels the recursion could reach.
    pub fn level_range(&self) -> (i64, i64) {
        (self.level_lo, self.level_hi)
    }

    /// `log ζ_j`, `1 <= j <= n`.
    pub fn log_zeta(&self, j: usize) -> f64 {
        self.log_zeta[j - 1]
    }

    pub fn zeta(&self, j: usize) -> f64 {
        self.log_zeta(j).exp()
    }

    pub fn log_zeta_n(&self) -> f64 {
        self.log_zeta(self.horizon)
    }

    pub fn zeta_n(&self) -> f64 {
        self.log_zeta_n().exp()
    }

    /// `log ζ_j` for every `j`.
    pub fn log_zeta_series(&self) -> &[f64] {
        &self.log_zeta
    }

    /// Unconstrained log weight of every level at horizon `n`, ignoring the
    /// corridor.
    pub fn final_levels(&self) -> &[(i64, f64)] {
        &self.final_levels
    }

    /// Log weight of one level at horizon `n` (`-∞` if unreachable).
    pub fn level_log_weight(&self, level: i64) -> f64 {
        self.final_levels
            .iter()
            .find(|(m, _)| *m == level)
            .map_or(f64::NEG_INFINITY, |(_, w)| *w)
    }

    /// Log of the total unconstrained weight at horizon `n`.
    pub fn log_total(&self) -> f64 {
        log_sum_exp(self.final_levels.iter().map(|(_, w)| *w))
    }

    /// Rows for every `j` (same layout as [`Self::final_levels`]) when the
    /// table was built with `keep_rows`.
    pub fn rows(&self) -> Option<&[Vec<(i64, f64)>]> {
        self.rows.as_deref()
    }
}

fn check_integer(psi: &CylinderPotential) -> Result<()> {
    match psi.values().iter().find(|v| (*v - v.round()).abs() > 1e-12) {
        Some(&v) => Err(Error::NonIntegerStep(v)),
        None => Ok(()),
    }
}

/// Runs the recursion. `f` and `psi` must have equal depth and alphabet.
pub(crate) fn build(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    alpha: f64,
    half_width: f64,
    n: usize,
    tilt: f64,
    opts: CorridorOptions,
) -> Result<CorridorTable> {
    if n == 0 {
        return Err(Error::Validation("horizon must be at least 1".into()));
    }
    if !(half_width > 0.0) {
        return Err(Error::Range(format!("corridor half-width {half_width} must be positive")));
    }
    if !alpha.is_finite() {
        return Err(Error::Range(format!("alpha {alpha} must be finite")));
    }
    check_integer(psi)?;
    let r = f.alphabet_size();
    let k = f.depth();
    let states = r.pow((k - 1) as u32);
    let steps: Vec<i64> = psi.values().iter().map(|v| v.round() as i64).collect();
    let step_lo = *steps.iter().min().expect("non-empty table");
    let step_hi = *steps.iter().max().expect("non-empty table");
    let body = n.saturating_sub(k - 1) as i64;
    let level_lo = body * step_lo.min(0);
    let level_hi = body * step_hi.max(0);
    let width = (level_hi - level_lo + 1) as usize;
    let cells = width.saturating_mul(states);
    if cells > opts.width_cap {
        return Err(Error::Width {
            width: cells,
            cap: opts.width_cap,
        });
    }

    // tilted window weights, shifted so the largest is 1
    let logw: Vec<f64> = (0..states * r)
        .map(|w| f.value_at(w) + tilt * steps[w] as f64)
        .collect();
    let shift = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weight: Vec<f64> = logw.iter().map(|l| (l - shift).exp()).collect();
    let f_tail = f.tail_sup_table();
    let psi_tail: Vec<i64> = psi.tail_sup_table().iter().map(|v| v.round() as i64).collect();

    let idx = |m: i64, a: usize| (m - level_lo) as usize * states + a;
    let mut row = vec![0.0; cells];
    let mut next = vec![0.0; cells];
    let mut log_scale = 0.0;
    let mut log_zeta = vec![f64::NEG_INFINITY; n];
    let mut rows = opts.keep_rows.then(Vec::new);

    // words of length k-1: weight 1 each, level 0 (no complete window yet)
    for a in 0..states {
        row[idx(0, a)] = 1.0;
    }
    // reachable level range after j complete windows
    let (mut lo, mut hi) = (0i64, 0i64);
    let tail_lo = *psi_tail.iter().min().expect("non-empty table");
    let tail_hi = *psi_tail.iter().max().expect("non-empty table");
    // untilted log weights of the final levels in [from, to] (tail included)
    let read = |row: &[f64], lo: i64, hi: i64, log_scale: f64, from: f64, to: f64| -> Vec<(i64, f64)> {
        let from = (from.ceil() as i64).max(lo + tail_lo);
        let to = (to.floor() as i64).min(hi + tail_hi);
        if from > to {
            return Vec::new();
        }
        let mut acc = vec![f64::NEG_INFINITY; (to - from + 1) as usize];
        for m in (from - tail_hi).max(lo)..=(to - tail_lo).min(hi) {
            for a in 0..states {
                let z = row[idx(m, a)];
                let level = m + psi_tail[a];
                if z == 0.0 || level < from || level > to {
                    continue;
                }
                let lw = z.ln() + log_scale + f_tail[a] - tilt * m as f64;
                let slot = &mut acc[(level - from) as usize];
                *slot = log_add_exp(*slot, lw);
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, w)| *w > f64::NEG_INFINITY)
            .map(|(i, w)| (from + i as i64, w))
            .collect()
    };
    for j in 1..=n {
        if j < k {
            continue;
        }
        // advance by one complete window
        let (nlo, nhi) = (lo + step_lo.min(0), hi + step_hi.max(0));
        for m in nlo..=nhi {
            for a in 0..states {
                next[idx(m, a)] = 0.0;
            }
        }
        for m in lo..=hi {
            for a in 0..states {
                let z = row[idx(m, a)];
                if z == 0.0 {
                    continue;
                }
                for x in 0..r {
                    let w = a * r + x;
                    next[idx(m + steps[w], w % states)] += z * weight[w];
                }
            }
        }
        let peak = (nlo..=nhi)
            .flat_map(|m| (0..states).map(move |a| (m, a)))
            .map(|(m, a)| next[idx(m, a)])
            .fold(0.0, f64::max);
        if peak > 0.0 {
            for m in nlo..=nhi {
                for a in 0..states {
                    next[idx(m, a)] /= peak;
                }
            }
            log_scale += peak.ln() + shift;
        }
        std::mem::swap(&mut row, &mut next);
        lo = nlo;
        hi = nhi;
        let target = j as f64 * alpha;
        let slack = half_width + 1e-9;
        let full = j == n || opts.keep_rows;
        let levels = if full {
            read(&row, lo, hi, log_scale, f64::NEG_INFINITY, f64::INFINITY)
        } else {
            read(&row, lo, hi, log_scale, target - slack, target + slack)
        };
        log_zeta[j - 1] = log_sum_exp(
            levels
                .iter()
                .filter(|(m, _)| (*m as f64 - target).abs() <= slack)
                .map(|(_, w)| *w),
        );
        if let Some(rows) = rows.as_mut() {
            rows.push(levels.clone());
        }
        if j == n {
            return Ok(CorridorTable {
                horizon: n,
                alpha,
                half_width,
                tilt,
                level_lo,
                level_hi,
                log_zeta,
                final_levels: levels,
                rows,
            });
        }
    }
    Err(Error::WordTooShort { len: n, depth: k })
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
