//! The cross-method invariant suite behind `pressurelab verify`.
//!
//! Each [`Criterion`] compares one computed quantity against a closed form
//! or against an independent route to the same number, at a fixed
//! tolerance. Random inputs are drawn from fixed seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fibre::{corridor_partition, fibre_pressure, symmetry_on_average_ratio};
use crate::pressure::{bowen_delta, gibbs_expectation, gibbs_measure, pressure, SubAlphabet};
use crate::sim::{
    chi_square_levels, conjugacy_check, exact_level_distribution, return_fraction, sample_orbits, SampleMode,
};
use crate::spectrum::{
    closed_form_oracle, delta_alpha_root, drift_and_gap, fit_orientation, spectrum_point, spectrum_slope,
    spectrum_sweep, Family,
};
use crate::symbolic::{psi_bounds, BranchModel, CylinderPotential, Word};

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {}. {}: {}", self.id, self.title, self.detail)
    }
}

/// Sizes of the statistical and deep-horizon checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Reduced sample sizes, a few seconds.
    Quick,
    /// The full suite.
    Full,
}

const SEED: u64 = 20_240_601;

fn rw(c1: f64, c2: f64) -> Result<BranchModel> {
    BranchModel::random_walk(c1, c2)
}

/// Worst absolute error of a list of `(computed, expected)` pairs.
fn worst(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs
        .into_iter()
        .map(|(a, b)| if a.is_nan() || b.is_nan() { f64::INFINITY } else { (a - b).abs() })
        .fold(0.0, f64::max)
}

/// `(c₁, c₂)` with `c₁ + c₂ <= 1`, from a fixed seed.
pub fn random_contraction_pairs(count: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count)
        .map(|_| {
            let c1 = rng.gen_range(0.05..0.85);
            let c2 = rng.gen_range(0.05..=(1.0 - c1));
            (c1, c2)
        })
        .collect()
}

fn fibre_closed_form() -> Result<(bool, String)> {
    let mut err: f64 = 0.0;
    for (c1, c2) in [(0.5, 0.5), (0.4, 0.6), (0.3, 0.7)] {
        let m = rw(c1, c2)?;
        for t in [0.0, 0.5, 1.0, 2.0] {
            let got = fibre_pressure(&m.geometric_potential().scaled(t), &m.step_potential())?.value;
            let want = 2f64.ln() + t * (c1 * c2).ln() / 2.0;
            err = err.max((got - want).abs());
        }
    }
    Ok((err <= 1e-9, format!("max |error| = {err:.2e} (tol 1e-9)")))
}

fn recurrent_dimension(pairs: &[(f64, f64)]) -> Result<(bool, String)> {
    let mut err: f64 = 0.0;
    for &(c1, c2) in pairs {
        let got = delta_alpha_root(&rw(c1, c2)?, 0.0)?;
        let want = 4f64.ln() / ((1.0 / c1).ln() + (1.0 / c2).ln());
        err = err.max((got - want).abs());
    }
    Ok((err <= 1e-8, format!("{} models, max |error| = {err:.2e} (tol 1e-8)", pairs.len())))
}

fn gap_criterion(pairs: &[(f64, f64)]) -> Result<(bool, String)> {
    let mut mismatches = 0;
    for &(c1, c2) in pairs {
        let r = drift_and_gap(&rw(c1, c2)?)?;
        if (r.gap > 1e-10) != (r.drift.abs() > 1e-10) {
            mismatches += 1;
        }
    }
    let symmetric = drift_and_gap(&rw(0.5, 0.5)?)?.gap;
    Ok((
        mismatches == 0 && symmetric.abs() <= 1e-12,
        format!("{mismatches} mismatches over {} models; gap at (0.5,0.5) = {symmetric:.1e}", pairs.len()),
    ))
}

/// The four closed-form families with their names.
pub fn oracle_families() -> Vec<(&'static str, Family)> {
    vec![
        ("A(0.5,0.5)", Family::A { c1: 0.5, c2: 0.5 }),
        ("A(0.3,0.7)", Family::A { c1: 0.3, c2: 0.7 }),
        ("B(1/2;0,1)", Family::B { c: 0.5, m1: 0, m2: 1 }),
        ("C(1/3;1,2)", Family::C { c: 1.0 / 3.0, g1: 1, g2: 2 }),
    ]
}

/// `count` evenly spaced points strictly inside the step range.
pub fn interior_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| lo + (hi - lo) * i as f64 / (count + 1) as f64).collect()
}

fn closed_forms_and_agreement() -> Result<((bool, String), (bool, String))> {
    let mut oracle_notes = Vec::new();
    let mut agree_notes = Vec::new();
    let (mut oracle_ok, mut agree_ok) = (true, true);
    for (name, family) in oracle_families() {
        let model = family.model()?;
        let (lo, hi) = family.step_range();
        let curve = spectrum_sweep(&model, &interior_grid(lo, hi, 41))?;
        let orientation = fit_orientation(&family, curve.summary.alpha_max, curve.summary.delta)?;
        let mut pairs = Vec::new();
        let mut spread: f64 = 0.0;
        for p in &curve.points {
            pairs.push((p.delta, closed_form_oracle(&family, p.alpha, orientation)?));
            let methods = [p.delta_root, p.delta_newton, p.delta_legendre];
            let values: Vec<f64> = methods.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    spread = spread.max(worst([(values[i], values[j])]));
                }
            }
        }
        let err = worst(pairs);
        oracle_ok &= err <= 1e-7;
        agree_ok &= spread <= 1e-6;
        oracle_notes.push(format!("{name} {err:.1e} ({orientation:?})"));
        agree_notes.push(format!("{name} {spread:.1e}"));
    }
    let cantor = Family::C { c: 1.0 / 3.0, g1: 1, g2: 2 };
    let endpoint = spectrum_point(&cantor.model()?, 1.0).delta;
    let endpoint_err = (endpoint - 2f64.ln() / 3f64.ln()).abs();
    oracle_ok &= endpoint_err <= 1e-9;
    oracle_notes.push(format!("C endpoint {endpoint_err:.1e}"));
    Ok((
        (oracle_ok, format!("max |error| {} (tol 1e-7, endpoint 1e-9)", oracle_notes.join(", "))),
        (agree_ok, format!("max pairwise spread {} (tol 1e-6)", agree_notes.join(", "))),
    ))
}

fn direct_series(n: usize) -> Result<(bool, String)> {
    let m = rw(0.4, 0.6)?;
    let alpha_max = drift_and_gap(&m)?.drift;
    let bound = 0.7 * (n as f64).ln() / n as f64 + 1e-3;
    let mut notes = Vec::new();
    let mut ok = true;
    for alpha in [0.0, alpha_max] {
        let delta = delta_alpha_root(&m, alpha)?;
        let table = corridor_partition(&m.geometric_potential().scaled(delta), &m.step_potential(), alpha, 2.0, n)?;
        let rate = table.log_zeta_n() / n as f64;
        ok &= rate.abs() <= bound;
        notes.push(format!("α={alpha:.3}: {rate:.2e}"));
    }
    Ok((ok, format!("n={n}, |rate| {} (bound {bound:.2e})", notes.join(", "))))
}

fn slope_identity() -> Result<(bool, String)> {
    let h = 1e-4;
    let mut err: f64 = 0.0;
    for (c1, c2) in [(0.5, 0.5), (0.3, 0.7)] {
        let m = rw(c1, c2)?;
        for alpha in interior_grid(-1.0, 1.0, 10) {
            let analytic = spectrum_slope(&m, alpha)?;
            let numeric = (delta_alpha_root(&m, alpha + h)? - delta_alpha_root(&m, alpha - h)?) / (2.0 * h);
            err = err.max((analytic - numeric).abs());
        }
    }
    Ok((err <= 1e-5, format!("max |analytic - central difference| = {err:.2e} (tol 1e-5)")))
}

fn pressure_properties(rng: &mut ChaCha8Rng) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let (mut convex_gap, mut deriv_err): (f64, f64) = (0.0, 0.0);
    for trial in 0..20usize {
        let (r, k) = (2 + trial % 2, 1 + trial % 3);
        let size = r.pow(k as u32);
        let draw = |rng: &mut ChaCha8Rng| (0..size).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<f64>>();
        let f = CylinderPotential::new(r, k, draw(rng))?;
        let g = CylinderPotential::new(r, k, draw(rng))?;
        let along = |t: f64| -> Result<f64> { pressure(&CylinderPotential::linear_combination(&[(1.0, &f), (t, &g)], 0.0)?) };
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        convex_gap = convex_gap.max(along(0.5 * (a + b))? - 0.5 * (along(a)? + along(b)?));
        let h = 1e-5;
        let numeric = (along(h)? - along(-h)?) / (2.0 * h);
        let mu = gibbs_measure(&f, &SubAlphabet::full(r))?;
        deriv_err = deriv_err.max((numeric - gibbs_expectation(&mu, &g)?).abs());
    }
    if convex_gap > 1e-12 {
        failures.push(format!("convexity violated by {convex_gap:.1e}"));
    }
    if deriv_err > 1e-6 {
        failures.push(format!("pressure derivative vs Gibbs mean off by {deriv_err:.1e}"));
    }
    Ok(failures)
}

fn fibre_properties(n: usize) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let m = rw(0.4, 0.6)?;
    let (phi, psi) = (m.geometric_potential(), m.step_potential());
    // with an unbounded corridor the row is the full partition sum (c₁ + c₂)^j = 1
    let full = corridor_partition(&phi, &psi, 0.0, f64::INFINITY, 200)?;
    let row = full.log_total().abs();
    if row > 1e-10 {
        failures.push(format!("row total off by {row:.1e}"));
    }
    let target = fibre_pressure(&phi, &psi)?.value;
    let bound = 0.7 * (n as f64).ln() / n as f64 + 1e-3;
    for k in [1.0, 2.0, 4.0] {
        let rate = corridor_partition(&phi, &psi, 0.0, k, n)?.log_zeta_n() / n as f64;
        if (rate - target).abs() > bound {
            failures.push(format!("K={k}: rate {rate:.4} vs pressure {target:.4}"));
        }
    }
    Ok(failures)
}

fn spectrum_properties() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for (c1, c2) in [(0.5, 0.5), (0.3, 0.7), (0.2, 0.5)] {
        let m = rw(c1, c2)?;
        let curve = spectrum_sweep(&m, &crate::spectrum::default_grid(&m, 101))?;
        if !curve.is_unimodal(1e-9) {
            failures.push(format!("({c1},{c2}) spectrum not unimodal"));
        }
        let b = psi_bounds(&m.step_potential());
        for alpha in [b.lower - 0.1, b.upper + 0.1] {
            if delta_alpha_root(&m, alpha)? != 0.0 {
                failures.push(format!("({c1},{c2}) δ_α nonzero at α = {alpha}"));
            }
        }
    }
    Ok(failures)
}

fn sim_properties(rng: &mut ChaCha8Rng, depth: Depth) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let mut dev: f64 = 0.0;
    for (_, family) in oracle_families() {
        let model = family.model()?;
        let r = model.alphabet_size();
        for _ in 0..100 {
            let word = Word::new((0..60).map(|_| rng.gen_range(0..r)).collect());
            let shift = rng.gen_range(-5..=5);
            dev = dev.max(conjugacy_check(&model, &word, shift, 12)?);
        }
    }
    if !(dev < 1e-9) {
        failures.push(format!("conjugacy deviation {dev:.1e}"));
    }

    let (n, count) = match depth {
        Depth::Quick => (1_000, 1_000),
        Depth::Full => (10_000, 10_000),
    };
    for (c1, c2) in [(0.5, 0.5), (0.4, 0.6)] {
        let m = rw(c1, c2)?;
        let delta = bowen_delta(&m)?;
        let mu = gibbs_measure(&m.geometric_potential().scaled(delta), &SubAlphabet::full(2))?;
        let want = gibbs_expectation(&mu, &m.step_potential())?;
        let batch = sample_orbits(&mu, &m.step_potential(), n, count, SEED, SampleMode::Summary)?;
        let (got, se) = batch.drift_estimate();
        if (got - want).abs() > 4.0 * se {
            failures.push(format!("({c1},{c2}) drift {got:.4} vs {want:.4} (se {se:.1e})"));
        }
    }

    let mu = crate::pressure::GibbsMeasure::bernoulli(&[0.4, 0.6])?;
    let psi = CylinderPotential::symbolwise(&[-1.0, 1.0]);
    let chi_count = match depth {
        Depth::Quick => 10_000,
        Depth::Full => 100_000,
    };
    let batch = sample_orbits(&mu, &psi, 100, chi_count, SEED, SampleMode::Summary)?;
    let law: Vec<(i64, f64)> = exact_level_distribution(&mu, &psi, 100)?
        .final_levels()
        .iter()
        .map(|(m, lw)| (*m, lw.exp()))
        .collect();
    let chi = chi_square_levels(&batch, &law)?;
    if !(chi.p_value > 1e-3) {
        failures.push(format!("chi-square p = {:.1e}", chi.p_value));
    }

    let fair = crate::pressure::GibbsMeasure::bernoulli(&[0.5, 0.5])?;
    let batch = sample_orbits(&fair, &psi, n, count.min(2_000), SEED, SampleMode::Summary)?;
    let horizons = [n / 100, n / 10, n];
    let fractions: Vec<(f64, f64)> = horizons.iter().map(|&h| return_fraction(&batch, 0.0, 1.0, h)).collect();
    if fractions.windows(2).any(|w| w[1].0 < w[0].0 - 2.0 * w[1].1) {
        failures.push(format!("return fractions not increasing: {fractions:?}"));
    }
    Ok(failures)
}

fn property_suites(depth: Depth) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let n = match depth {
        Depth::Quick => 1_000,
        Depth::Full => 4_000,
    };
    let mut failures = pressure_properties(&mut rng)?;
    failures.extend(fibre_properties(n)?);
    failures.extend(spectrum_properties()?);
    failures.extend(sim_properties(&mut rng, depth)?);
    Ok(if failures.is_empty() {
        (true, "pressure, fibre, spectrum and simulation properties hold".into())
    } else {
        (false, failures.join("; "))
    })
}

fn symmetry_diagnostic() -> Result<(bool, String)> {
    let ratio = |c1, c2| -> Result<f64> {
        let m = rw(c1, c2)?;
        symmetry_on_average_ratio(&m.geometric_potential(), &m.step_potential(), 500, 10)
    };
    let (even, skew) = (ratio(0.5, 0.5)?, ratio(0.4, 0.6)?);
    Ok((
        (even - 1.0).abs() <= 0.1 && skew > 10.0,
        format!("ratio {even:.4} at (0.5,0.5), {skew:.1} at (0.4,0.6)"),
    ))
}

fn record(id: u8, title: &'static str, outcome: Result<(bool, String)>) -> Criterion {
    let (passed, detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, format!("{}: {e}", e.case())),
    };
    Criterion { id, title, passed, detail }
}

/// Runs every criterion in order.
pub fn run(depth: Depth) -> Vec<Criterion> {
    let pairs = random_contraction_pairs(match depth {
        Depth::Quick => 5,
        Depth::Full => 20,
    });
    let (oracle, agreement) = match closed_forms_and_agreement() {
        Ok(pair) => (Ok(pair.0), Ok(pair.1)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    vec![
        record(1, "random-walk fibre pressure", fibre_closed_form()),
        record(2, "recurrent-set dimension", recurrent_dimension(&pairs)),
        record(3, "dimension gap iff nonzero drift", gap_criterion(&pairs)),
        record(4, "spectrum closed forms", oracle),
        record(5, "three-method agreement", agreement),
        record(6, "direct-series consistency", direct_series(match depth {
            Depth::Quick => 1_000,
            Depth::Full => 4_000,
        })),
        record(7, "slope identity", slope_identity()),
        record(8, "property suites", property_suites(depth)),
        record(9, "symmetry-on-average diagnostic", symmetry_diagnostic()),
    ]
}

/// `Ok` when every criterion passed, otherwise the failed ids.
pub fn summarize(results: &[Criterion]) -> Result<(), Vec<u8>> {
    let failed: Vec<u8> = results.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn random_pairs_are_admissible_and_reproducible() {
        let a = random_contraction_pairs(20);
        assert_eq!(a, random_contraction_pairs(20));
        assert!(a.iter().all(|&(c1, c2)| c1 > 0.0 && c2 > 0.0 && c1 + c2 <= 1.0));
    }

    #[test]
    fn quick_criteria_that_need_no_sampling() {
        assert!(fibre_closed_form().unwrap().0);
        assert!(symmetry_diagnostic().unwrap().0);
        let line = record(1, "x", Err(Error::Bracket("none".into()))).to_string();
        assert!(line.starts_with("[FAIL] 1. x: BracketError"));
    }
}
