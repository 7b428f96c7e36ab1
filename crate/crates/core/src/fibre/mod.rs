//! Fibre-induced pressure: partition sums restricted to words whose
//! `ψ`-sum stays in a bounded corridor.
//!
//! Two independent routes are provided. The variational one minimises
//! `s ↦ 𝔓(sψ + f)`; the direct one evaluates `ζ_n` with a lattice dynamic
//! program over integer levels.

mod corridor;

pub use corridor::{CorridorOptions, CorridorTable, Tilt, WIDTH_CAP};

use crate::error::{Error, Result};
use crate::pressure::{classical_pressure, gibbs_measure, SubAlphabet};
use crate::solve::{log_sum_exp, safeguarded_newton, Tolerance};
use crate::symbolic::{psi_bounds, CylinderPotential};

/// Zero counts as a boundary value of `[ψ̲, ψ̄]` within this distance.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `0 ∈ (ψ̲, ψ̄)`.
    Interior,
    /// `ψ̲ = 0`.
    BoundaryLower,
    /// `ψ̄ = 0`.
    BoundaryUpper,
    /// `0 ∉ [ψ̲, ψ̄]`; the pressure is `-∞`.
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FibrePressureResult {
    /// `f64::NEG_INFINITY` exactly in the empty regime.
    pub value: f64,
    /// `t(f)`, present in the interior regime.
    pub minimizer: Option<f64>,
    pub regime: Regime,
    /// `I₀ = {i : ψ_i = 0}` in the boundary regimes.
    pub i0: Option<SubAlphabet>,
}

impl FibrePressureResult {
    pub fn is_finite(&self) -> bool {
        self.regime != Regime::Empty
    }
}

/// Both potentials lifted to their common depth.
pub(crate) fn common_depth(
    f: &CylinderPotential,
    psi: &CylinderPotential,
) -> Result<(CylinderPotential, CylinderPotential)> {
    if f.alphabet_size() != psi.alphabet_size() {
        return Err(Error::Depth(format!(
            "alphabets differ: {} and {}",
            f.alphabet_size(),
            psi.alphabet_size()
        )));
    }
    let k = f.depth().max(psi.depth());
    Ok((f.lift(k)?, psi.lift(k)?))
}

pub fn regime(psi: &CylinderPotential) -> Regime {
    let b = psi_bounds(psi);
    if b.lower > BOUNDARY_TOL || b.upper < -BOUNDARY_TOL {
        Regime::Empty
    } else if b.lower.abs() <= BOUNDARY_TOL {
        Regime::BoundaryLower
    } else if b.upper.abs() <= BOUNDARY_TOL {
        Regime::BoundaryUpper
    } else {
        Regime::Interior
    }
}

/// Pressure, drift `μ(ψ)` and asymptotic variance of `ψ` at `sψ + f`.
pub(crate) fn tilted_moments(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    s: f64,
) -> Result<(f64, f64, f64)> {
    let pot = CylinderPotential::linear_combination(&[(s, psi), (1.0, f)], 0.0)?;
    let full = SubAlphabet::full(f.alphabet_size());
    let p = classical_pressure(&pot, &full)?.value;
    let mu = gibbs_measure(&pot, &full)?;
    Ok((p, mu.expectation(psi)?, mu.asymptotic_covariance(psi, psi)?))
}

/// Result of the interior minimisation of `s ↦ 𝔓(sψ + f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimizer {
    pub t: f64,
    /// `min_s 𝔓(sψ + f)`.
    pub pressure: f64,
    /// `μ_{tψ+f}(ψ)`, zero up to round-off.
    pub drift: f64,
    /// Second derivative of the pressure at `t`; strictly positive.
    pub variance: f64,
}

/// The unique `t(f)` with `μ_{t(f)ψ+f}(ψ) = 0`.
pub fn minimizer_t(f: &CylinderPotential, psi: &CylinderPotential) -> Result<Minimizer> {
    let (f, psi) = common_depth(f, psi)?;
    let found = regime(&psi);
    if found != Regime::Interior {
        return Err(Error::Regime(format!("{found:?}: 0 is not interior to the step range")));
    }
    interior_minimizer(&f, &psi)
}

fn interior_minimizer(f: &CylinderPotential, psi: &CylinderPotential) -> Result<Minimizer> {
    let scale = psi.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cap = 700.0 / scale;
    let drift = |s: f64| -> Result<f64> { Ok(tilted_moments(f, psi, s)?.1) };
    let (mut lo, mut hi) = (-1.0f64.min(cap), 1.0f64.min(cap));
    while drift(lo)? > 0.0 {
        if lo <= -cap {
            return Err(Error::Bracket(format!("drift stays positive down to s = {lo}")));
        }
        lo = (2.0 * lo).max(-cap);
    }
    while drift(hi)? < 0.0 {
        if hi >= cap {
            return Err(Error::Bracket(format!("drift stays negative up to s = {hi}")));
        }
        hi = (2.0 * hi).min(cap);
    }
    let t = safeguarded_newton(
        |s| {
            let (_, d, v) = tilted_moments(f, psi, s)?;
            Ok((d, v))
        },
        lo,
        hi,
        Tolerance::default(),
    )?;
    let (pressure, drift, variance) = tilted_moments(f, psi, t)?;
    Ok(Minimizer {
        t,
        pressure,
        drift,
        variance,
    })
}

/// `𝒫(f, ψ)`.
pub fn fibre_pressure(f: &CylinderPotential, psi: &CylinderPotential) -> Result<FibrePressureResult> {
    let psi_depth = psi.depth();
    let (f, psi) = common_depth(f, psi)?;
    match regime(&psi) {
        Regime::Empty => Ok(FibrePressureResult {
            value: f64::NEG_INFINITY,
            minimizer: None,
            regime: Regime::Empty,
            i0: None,
        }),
        Regime::Interior => {
            let m = interior_minimizer(&f, &psi)?;
            Ok(FibrePressureResult {
                value: m.pressure,
                minimizer: Some(m.t),
                regime: Regime::Interior,
                i0: None,
            })
        }
        boundary => {
            if psi_depth > 1 {
                return Err(Error::BoundaryDepth(psi_depth));
            }
            let zeros: Vec<usize> = (0..psi.alphabet_size())
                .filter(|&i| psi.value(&vec![i; psi.depth()]).abs() <= BOUNDARY_TOL)
                .collect();
            let i0 = SubAlphabet::new(zeros, psi.alphabet_size())?;
            Ok(FibrePressureResult {
                value: classical_pressure(&f, &i0)?.value,
                minimizer: None,
                regime: boundary,
                i0: Some(i0),
            })
        }
    }
}

/// `max_i |ψ_i| + 1`, wide enough that every horizon has lattice levels in
/// the corridor.
pub fn default_half_width(psi: &CylinderPotential) -> f64 {
    psi.values().iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0
}

/// `ζ_j(f, ψ - α, K)` for `j = 1..=n`.
pub fn corridor_partition(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    alpha: f64,
    half_width: f64,
    n: usize,
) -> Result<CorridorTable> {
    corridor_partition_with(f, psi, alpha, half_width, n, CorridorOptions::default())
}

pub fn corridor_partition_with(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    alpha: f64,
    half_width: f64,
    n: usize,
    opts: CorridorOptions,
) -> Result<CorridorTable> {
    let (f, psi) = common_depth(f, psi)?;
    let tilt = match opts.tilt {
        Tilt::None => 0.0,
        Tilt::Fixed(q) => q,
        Tilt::Auto => {
            let centred = psi.add_constant(-alpha);
            if alpha.is_finite() && regime(&centred) == Regime::Interior {
                interior_minimizer(&f, &centred)?.t
            } else {
                0.0
            }
        }
    };
    corridor::build(&f, &psi, alpha, half_width, n, tilt, opts)
}

/// `(j, (1/j) log ζ_j(f, ψ, K))` for every horizon up to `n_max`; the last
/// entry approaches `𝒫(f, ψ)` at rate `O(log n / n)`.
pub fn fibre_pressure_estimate(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    half_width: f64,
    n_max: usize,
) -> Result<Vec<(usize, f64)>> {
    let table = corridor_partition(f, psi, 0.0, half_width, n_max)?;
    Ok(table
        .log_zeta_series()
        .iter()
        .enumerate()
        .map(|(i, lz)| (i + 1, lz / (i + 1) as f64))
        .collect())
}

/// Heuristic growth class of the recurrence series' partial sums, fitted
/// from `S(N)` against `S(N/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// Partial sums look convergent.
    BoundedSuspect,
    /// Growth slower than any visible power.
    LogLike,
    /// Power-law growth `N^exponent`; `exponent ≈ 1/2` for a centred
    /// walk on `ℤ`.
    LinearLike { exponent: f64 },
}

/// Exponent thresholds separating the [`Growth`] classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthThresholds {
    pub bounded: f64,
    pub power: f64,
}

impl Default for GrowthThresholds {
    fn default() -> Self {
        Self {
            bounded: 0.05,
            power: 0.25,
        }
    }
}

/// Partial sums of `Σ_{ω∈C(K)} exp(S_ω f - |ω| 𝒫(f, ψ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDiagnostic {
    /// `partial_sums[j-1] = Σ_{i<=j} ζ_i e^{-i𝒫}`.
    pub partial_sums: Vec<f64>,
    /// Fitted exponent `log(S(N)/S(N/4)) / log 4`; zero for empty series.
    pub exponent: f64,
    pub growth: Growth,
}

/// The recurrence series up to length `n`, with a fitted growth tag. An
/// empty corridor regime (`𝒫 = -∞`) yields an empty series of zeros.
pub fn recurrence_series(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    half_width: f64,
    n: usize,
) -> Result<SeriesDiagnostic> {
    recurrence_series_with(f, psi, half_width, n, GrowthThresholds::default())
}

pub fn recurrence_series_with(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    half_width: f64,
    n: usize,
    thresholds: GrowthThresholds,
) -> Result<SeriesDiagnostic> {
    let fp = fibre_pressure(f, psi)?;
    if !fp.is_finite() {
        return Ok(SeriesDiagnostic {
            partial_sums: vec![0.0; n],
            exponent: 0.0,
            growth: Growth::BoundedSuspect,
        });
    }
    let table = corridor_partition(f, psi, 0.0, half_width, n)?;
    let mut total = 0.0;
    let partial_sums: Vec<f64> = table
        .log_zeta_series()
        .iter()
        .enumerate()
        .map(|(i, lz)| {
            total += (lz - (i + 1) as f64 * fp.value).exp();
            total
        })
        .collect();
    let exponent = growth_exponent(&partial_sums);
    let growth = if exponent < thresholds.bounded {
        Growth::BoundedSuspect
    } else if exponent < thresholds.power {
        Growth::LogLike
    } else {
        Growth::LinearLike { exponent }
    };
    Ok(SeriesDiagnostic {
        partial_sums,
        exponent,
        growth,
    })
}

fn growth_exponent(partial: &[f64]) -> f64 {
    let n = partial.len();
    if n < 4 {
        return 0.0;
    }
    let (late, early) = (partial[n - 1], partial[n / 4 - 1]);
    if !(early > 0.0) {
        return 0.0;
    }
    (late / early).ln() / 4f64.ln()
}

/// `max_{1<=|m|<=m_cap} W_n(m) / W_n(-m)`, where
/// `W_n(m) = Σ_{|ω|<=n, S_ω ψ = m} exp(S_ω f - |ω| 𝒫(f, ψ))`, over levels
/// reachable from both sides. For a fixed horizon this grows with `m_cap`
/// unless `μ_f(ψ) = 0`.
pub fn symmetry_on_average_ratio(
    f: &CylinderPotential,
    psi: &CylinderPotential,
    n: usize,
    m_cap: i64,
) -> Result<f64> {
    let p = fibre_pressure(f, psi)?.value;
    if !p.is_finite() {
        return Err(Error::Range("fibre pressure is -inf; no level is reachable from both sides".into()));
    }
    let opts = CorridorOptions {
        tilt: Tilt::Auto,
        keep_rows: true,
        ..CorridorOptions::default()
    };
    let table = corridor_partition_with(f, psi, 0.0, f64::INFINITY, n, opts)?;
    let rows = table.rows().expect("rows were requested");
    let first = n + 1 - rows.len();
    let cumulative = |level: i64| {
        log_sum_exp(rows.iter().enumerate().flat_map(|(i, row)| {
            let j = (first + i) as f64;
            row.iter().filter(move |(m, _)| *m == level).map(move |(_, w)| w - j * p)
        }))
    };
    let mut worst: f64 = 0.0;
    for m in 1..=m_cap {
        let (up, down) = (cumulative(m), cumulative(-m));
        match (up > f64::NEG_INFINITY, down > f64::NEG_INFINITY) {
            (true, true) => worst = worst.max((up - down).abs().exp()),
            (false, false) => {}
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::pressure;
    use crate::symbolic::BranchModel;
    use approx::assert_abs_diff_eq;

    fn rw(c1: f64, c2: f64) -> BranchModel {
        BranchModel::random_walk(c1, c2).unwrap()
    }

    #[test]
    fn random_walk_fibre_pressure() {
        let m = rw(0.4, 0.6);
        let r = fibre_pressure(&m.geometric_potential(), &m.step_potential()).unwrap();
        assert_eq!(r.regime, Regime::Interior);
        let closed = 2f64.ln() + 0.5 * (0.4f64 * 0.6).ln();
        assert_abs_diff_eq!(r.value, closed, epsilon = 1e-13);
        assert_abs_diff_eq!(r.value, -0.020_410_997_260_127_6, epsilon = 1e-13);
    }

    #[test]
    fn boundary_and_empty_regimes() {
        let m = BranchModel::from_pairs(&[(0.5, 0), (0.5, 1)]).unwrap();
        let r = fibre_pressure(&CylinderPotential::zero(2), &m.step_potential()).unwrap();
        assert_eq!(r.regime, Regime::BoundaryLower);
        assert_eq!(r.i0.unwrap().symbols(), &[0]);
        assert_eq!(r.value, 0.0);

        let m = BranchModel::from_pairs(&[(0.5, 1), (0.5, 2)]).unwrap();
        let r = fibre_pressure(&m.geometric_potential(), &m.step_potential()).unwrap();
        assert_eq!(r.regime, Regime::Empty);
        assert_eq!(r.value, f64::NEG_INFINITY);

        let deep = CylinderPotential::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            fibre_pressure(&CylinderPotential::zero(2), &deep),
            Err(Error::BoundaryDepth(2))
        ));
    }

    #[test]
    fn minimizer_examples() {
        let m = rw(0.5, 0.5);
        let t = minimizer_t(&CylinderPotential::zero(2), &m.step_potential()).unwrap();
        assert_abs_diff_eq!(t.t, 0.0, epsilon = 1e-14);

        let m = rw(0.4, 0.6);
        let t = minimizer_t(&m.geometric_potential(), &m.step_potential()).unwrap();
        assert_abs_diff_eq!(t.t, -0.202_732_554_054_082, epsilon = 1e-12);
        assert!(t.drift.abs() < 1e-10 && t.variance > 0.0);

        let psi = CylinderPotential::symbolwise(&[-1.0, 1.0, 1.0]);
        let t = minimizer_t(&CylinderPotential::zero(3), &psi).unwrap();
        assert_abs_diff_eq!(t.t, -0.346_573_590_279_973, epsilon = 1e-12);

        let psi = CylinderPotential::symbolwise(&[0.0, 1.0]);
        assert!(matches!(
            minimizer_t(&CylinderPotential::zero(2), &psi),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn corridor_examples() {
        let m = rw(0.5, 0.5);
        let phi = m.geometric_potential();
        let psi = m.step_potential();
        let t = corridor_partition(&phi, &psi, 0.0, 0.5, 2).unwrap();
        assert_abs_diff_eq!(t.zeta_n(), 0.5, epsilon = 1e-15);
        let zero = CylinderPotential::zero(2);
        let t = corridor_partition(&zero, &psi, 0.0, 0.5, 4).unwrap();
        assert_abs_diff_eq!(t.zeta_n(), 6.0, epsilon = 1e-12);
        let t = corridor_partition(&zero, &psi, 1.0, 0.5, 3).unwrap();
        assert_abs_diff_eq!(t.zeta_n(), 1.0, epsilon = 1e-12);
        assert!(matches!(
            corridor_partition(&zero, &psi.scaled(0.5), 0.0, 1.0, 3),
            Err(Error::NonIntegerStep(_))
        ));
        let narrow = CorridorOptions {
            width_cap: 10,
            ..CorridorOptions::default()
        };
        assert!(matches!(
            corridor_partition_with(&zero, &psi, 0.0, 1.0, 100, narrow),
            Err(Error::Width { .. })
        ));
    }

    #[test]
    fn unconstrained_row_total() {
        let f = CylinderPotential::symbolwise(&[0.3, -0.8, 0.1]);
        let psi = CylinderPotential::symbolwise(&[-1.0, 2.0, 0.0]);
        let n = 50;
        let t = corridor_partition(&f, &psi, 0.0, f64::INFINITY, n).unwrap();
        let expected = n as f64 * pressure(&f).unwrap();
        assert!((t.log_total() - expected).abs() < 1e-10);
        assert!((t.log_zeta_n() - expected).abs() < 1e-10);
    }

    #[test]
    fn deep_corridor_matches_enumeration() {
        use crate::symbolic::{birkhoff_sum, index_word, Word};
        let f = CylinderPotential::new(2, 2, vec![0.2, -0.5, 0.4, -0.1]).unwrap();
        let psi = CylinderPotential::new(2, 2, vec![-1.0, 1.0, 0.0, 2.0]).unwrap();
        let n = 10;
        let t = corridor_partition(&f, &psi, 0.3, 1.5, n).unwrap();
        for j in 2..=n {
            let mut total = 0.0;
            for i in 0..1 << j {
                let w = Word::new(index_word(i, j, 2));
                let s = birkhoff_sum(&psi, &w).unwrap();
                if (s - 0.3 * j as f64).abs() <= 1.5 {
                    total += birkhoff_sum(&f, &w).unwrap().exp();
                }
            }
            assert!((t.zeta(j) - total).abs() <= 1e-12 * total.max(1.0), "j = {j}");
        }
    }

    #[test]
    fn estimator_tracks_the_variational_value() {
        let m = rw(0.4, 0.6);
        let phi = m.geometric_potential();
        let psi = m.step_potential();
        let est = fibre_pressure_estimate(&phi, &psi, 1.0, 2000).unwrap();
        let (_, last) = est[est.len() - 1];
        assert!((last + 0.0204).abs() < 0.01, "{last}");

        let m = BranchModel::from_pairs(&[(0.5, 1), (0.5, 2)]).unwrap();
        let est = fibre_pressure_estimate(&m.geometric_potential(), &m.step_potential(), 1.0, 20).unwrap();
        assert_eq!(est[19].1, f64::NEG_INFINITY);
    }

    #[test]
    fn recurrence_series_tags() {
        let m = rw(0.5, 0.5);
        let d = recurrence_series(&m.geometric_potential(), &m.step_potential(), 1.0, 5000).unwrap();
        assert!(d.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        match d.growth {
            Growth::LinearLike { exponent } => assert!((exponent - 0.5).abs() < 0.05),
            other => panic!("{other:?}"),
        }
        let m = BranchModel::from_pairs(&[(0.5, 1), (0.5, 2)]).unwrap();
        let d = recurrence_series(&m.geometric_potential(), &m.step_potential(), 1.0, 100).unwrap();
        assert_eq!(d.partial_sums.last(), Some(&0.0));
    }

    #[test]
    fn symmetry_ratio_examples() {
        let m = rw(0.5, 0.5);
        let r = symmetry_on_average_ratio(&m.geometric_potential(), &m.step_potential(), 500, 10).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let r = symmetry_on_average_ratio(&m.geometric_potential().scaled(2.0), &m.step_potential(), 500, 10).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let m = rw(0.4, 0.6);
        let r = symmetry_on_average_ratio(&m.geometric_potential(), &m.step_potential(), 500, 10).unwrap();
        assert!(r > 10.0);
        // every length contributes (0.6/0.4)^m, odd levels included
        let r = symmetry_on_average_ratio(&m.geometric_potential(), &m.step_potential(), 41, 3).unwrap();
        assert_abs_diff_eq!(r, 1.5f64.powi(3), epsilon = 1e-9);
        let lazy = CylinderPotential::symbolwise(&[0.0, 1.0]);
        let r = symmetry_on_average_ratio(&m.geometric_potential(), &lazy, 20, 2).unwrap();
        assert_eq!(r, f64::INFINITY);
    }
}
