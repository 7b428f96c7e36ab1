//! The α-Poincaré exponents `δ_α` and the dimension spectrum.
//!
//! `δ_α` is computed three independent ways:
//!
//! 1. as the zero of `s ↦ 𝒫(sφ, ψ - α)` ([`delta_alpha_root`]);
//! 2. by 2-D Newton on `𝔓(sφ + qψ_α) = 0`, `μ(ψ_α) = 0`
//!    ([`delta_alpha_newton`]);
//! 3. as `inf_r s(r, -αr)` over the implicit zero-pressure surface
//!    ([`delta_alpha_legendre`]).

mod oracle;

pub use oracle::{closed_form_oracle, fit_orientation, Family, Orientation};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fibre::{fibre_pressure, minimizer_t, Regime};
use crate::pressure::{bowen_delta, classical_pressure, gibbs_measure, zero_pressure_exponent, SubAlphabet};
use crate::solve::{golden_section, safeguarded_newton, Tolerance};
use crate::symbolic::{psi_bounds, BranchModel, CylinderPotential, PsiBounds};

/// Target for `|𝔓|` and `|μ(ψ_α)|` at a Newton solution.
pub const NEWTON_RESIDUAL: f64 = 1e-11;

/// Pressure values within this of zero at `s = δ` count as the peak.
const PEAK_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// `ψ - α` for the model's step potential.
pub fn centred_steps(model: &BranchModel, alpha: f64) -> CylinderPotential {
    model.step_potential().add_constant(-alpha)
}

fn bounds(model: &BranchModel) -> PsiBounds {
    psi_bounds(&model.step_potential())
}

/// Position of `α` relative to `[ψ̲, ψ̄]`.
pub fn alpha_regime(model: &BranchModel, alpha: f64) -> Regime {
    crate::fibre::regime(&centred_steps(model, alpha))
}

/// `δ_α` as the zero of the fibre-induced pressure `s ↦ 𝒫(sφ, ψ_α)`.
/// Zero outside `[ψ̲, ψ̄]`; at the endpoints the boundary formula
/// `𝔓(sφ, I₀) = 0` is used.
pub fn delta_alpha_root(model: &BranchModel, alpha: f64) -> Result<f64> {
    if alpha_regime(model, alpha) == Regime::Empty {
        return Ok(0.0);
    }
    let phi = model.geometric_potential();
    let psi = centred_steps(model, alpha);
    let delta = bowen_delta(model)?;
    let eval = |s: f64| -> Result<(f64, f64)> {
        let f = phi.scaled(s);
        let fp = fibre_pressure(&f, &psi)?;
        let slope = match (fp.regime, fp.minimizer, &fp.i0) {
            (Regime::Interior, Some(t), _) => {
                let pot = CylinderPotential::linear_combination(&[(1.0, &f), (t, &psi)], 0.0)?;
                gibbs_measure(&pot, &SubAlphabet::full(model.alphabet_size()))?.expectation(&phi)?
            }
            (_, _, Some(i0)) => gibbs_measure(&f, i0)?.expectation(&phi)?,
            _ => return Err(Error::Regime("fibre pressure is not finite".into())),
        };
        Ok((fp.value, slope))
    };
    let (at_zero, _) = eval(0.0)?;
    if at_zero <= 0.0 {
        return Ok(0.0);
    }
    // 𝒫(δφ, ψ_α) <= 𝔓(δφ) = 0, with equality at α = α_max; round-off there
    // can leave no sign change
    let (at_delta, _) = eval(delta)?;
    if at_delta >= -PEAK_TOL {
        return Ok(delta);
    }
    safeguarded_newton(eval, 0.0, delta, Tolerance::default())
}

/// Solution of the 2-D system characterising `δ_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSolution {
    pub delta: f64,
    pub q: f64,
    /// ∞-norm of `(𝔓, μ(ψ_α))` at the solution.
    pub residual: f64,
    pub iterations: usize,
    /// Whether the nested 1-D fallback produced the result.
    pub fallback: bool,
}

struct Moments {
    pressure: f64,
    drift: f64,
    mean_phi: f64,
    cov: f64,
    var: f64,
}

fn moments(phi: &CylinderPotential, psi: &CylinderPotential, s: f64, q: f64) -> Result<Moments> {
    let pot = CylinderPotential::linear_combination(&[(s, phi), (q, psi)], 0.0)?;
    let full = SubAlphabet::full(phi.alphabet_size());
    let mu = gibbs_measure(&pot, &full)?;
    Ok(Moments {
        pressure: classical_pressure(&pot, &full)?.value,
        drift: mu.expectation(psi)?,
        mean_phi: mu.expectation(phi)?,
        cov: mu.asymptotic_covariance(phi, psi)?,
        var: mu.asymptotic_covariance(psi, psi)?,
    })
}

/// `(δ_α, q_α)` by damped Newton from `(δ, 0)` on
/// `F(s, q) = (𝔓(sφ + qψ_α), μ_{sφ+qψ_α}(ψ_α))` with the analytic Jacobian
/// `[[μ(φ), μ(ψ_α)], [Cov(φ, ψ_α), Var(ψ_α)]]`.
///
/// Falls back to nested 1-D solves if the iteration stalls.
pub fn delta_alpha_newton(model: &BranchModel, alpha: f64) -> Result<NewtonSolution> {
    let regime = alpha_regime(model, alpha);
    if regime != Regime::Interior {
        return Err(Error::Regime(format!("alpha {alpha} is not interior ({regime:?})")));
    }
    let phi = model.geometric_potential();
    let psi = centred_steps(model, alpha);
    match newton_2d(&phi, &psi, bowen_delta(model)?) {
        Ok(sol) => Ok(sol),
        Err(first) => nested(model, alpha, &phi, &psi).map_err(|second| {
            Error::SingularJacobian(format!("newton: {first}; nested fallback: {second}"))
        }),
    }
}

fn newton_2d(phi: &CylinderPotential, psi: &CylinderPotential, delta: f64) -> Result<NewtonSolution> {
    let (mut s, mut q) = (delta, 0.0);
    let mut m = moments(phi, psi, s, q)?;
    let norm = |m: &Moments| m.pressure.abs().max(m.drift.abs());
    let mut residual = norm(&m);
    for it in 0..NEWTON_MAX_ITER {
        if residual < 1e-14 {
            return Ok(NewtonSolution { delta: s, q, residual, iterations: it, fallback: false });
        }
        let det = m.mean_phi * m.var - m.drift * m.cov;
        if !(det.abs() > 1e-300) || !det.is_finite() {
            return Err(Error::SingularJacobian(format!("determinant {det} at ({s}, {q})")));
        }
        // solve J (ds, dq) = -F
        let ds = -(m.var * m.pressure - m.drift * m.drift) / det;
        let dq = -(m.mean_phi * m.drift - m.cov * m.pressure) / det;
        let mut lambda = 1.0;
        loop {
            let (ns, nq) = (s + lambda * ds, q + lambda * dq);
            let trial = moments(phi, psi, ns, nq);
            if let Ok(t) = trial {
                let r = norm(&t);
                if r.is_finite() && r < residual {
                    s = ns;
                    q = nq;
                    m = t;
                    residual = r;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                if residual < NEWTON_RESIDUAL {
                    return Ok(NewtonSolution { delta: s, q, residual, iterations: it, fallback: false });
                }
                return Err(Error::Convergence { iterations: it, residual });
            }
        }
    }
    if residual < NEWTON_RESIDUAL {
        Ok(NewtonSolution { delta: s, q, residual, iterations: NEWTON_MAX_ITER, fallback: false })
    } else {
        Err(Error::Convergence { iterations: NEWTON_MAX_ITER, residual })
    }
}

fn nested(
    model: &BranchModel,
    alpha: f64,
    phi: &CylinderPotential,
    psi: &CylinderPotential,
) -> Result<NewtonSolution> {
    let s = delta_alpha_root(model, alpha)?;
    let q = minimizer_t(&phi.scaled(s), psi)?.t;
    let m = moments(phi, psi, s, q)?;
    Ok(NewtonSolution {
        delta: s,
        q,
        residual: m.pressure.abs().max(m.drift.abs()),
        iterations: 0,
        fallback: true,
    })
}

/// `δ_α = inf_r s(r, -αr)` where `𝔓(s(q, a)φ + qψ) + a = 0`.
///
/// Golden-section search locates the minimising `r`, then Newton on the
/// stationarity condition `μ(ψ_α) = 0` polishes it.
pub fn delta_alpha_legendre(model: &BranchModel, alpha: f64) -> Result<f64> {
    let regime = alpha_regime(model, alpha);
    if regime != Regime::Interior {
        return Err(Error::Regime(format!("alpha {alpha} is not interior ({regime:?})")));
    }
    let phi = model.geometric_potential();
    let steps = model.step_potential();
    let psi = centred_steps(model, alpha);
    let surface = |r: f64| zero_pressure_exponent(&phi, &steps.scaled(r), -alpha * r);
    // h'(r) has the sign of the drift along the surface
    let drift = |r: f64| -> Result<(f64, f64)> {
        let s = surface(r)?;
        let m = moments(&phi, &psi, s, r)?;
        let ds_dr = -m.drift / m.mean_phi;
        Ok((m.drift, m.var + m.cov * ds_dr))
    };
    let scale = psi.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cap = 700.0 / scale;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while drift(lo)?.0 > 0.0 {
        if lo <= -cap {
            return Err(Error::Bracket(format!("surface still decreasing at r = {lo}")));
        }
        lo = (2.0 * lo).max(-cap);
    }
    while drift(hi)?.0 < 0.0 {
        if hi >= cap {
            return Err(Error::Bracket(format!("surface still increasing at r = {hi}")));
        }
        hi = (2.0 * hi).min(cap);
    }
    let (r0, _) = golden_section(surface, lo, hi, 1e-6 * (hi - lo))?;
    let w = 1e-5 * (hi - lo);
    let (a, b) = match (drift(r0 - w), drift(r0 + w)) {
        (Ok((da, _)), Ok((db, _))) if da <= 0.0 && db >= 0.0 => (r0 - w, r0 + w),
        _ => (lo, hi),
    };
    let r = safeguarded_newton(drift, a, b, Tolerance::default())?;
    surface(r)
}

/// `dδ_α/dα = q_α / μ(φ)` under `μ_{δ_αφ + q_αψ_α}`.
pub fn spectrum_slope(model: &BranchModel, alpha: f64) -> Result<f64> {
    let sol = delta_alpha_newton(model, alpha)?;
    slope_at(model, alpha, &sol)
}

fn slope_at(model: &BranchModel, alpha: f64, sol: &NewtonSolution) -> Result<f64> {
    let m = moments(&model.geometric_potential(), &centred_steps(model, alpha), sol.delta, sol.q)?;
    Ok(sol.q / m.mean_phi)
}

/// Entropy over Lyapunov exponent of `μ_α = μ_{δ_αφ + q_αψ_α}`; equals
/// `δ_α` by Young's formula.
pub fn gibbs_dimension(model: &BranchModel, alpha: f64) -> Result<f64> {
    let sol = delta_alpha_newton(model, alpha)?;
    let phi = model.geometric_potential();
    let pot = CylinderPotential::linear_combination(
        &[(sol.delta, &phi), (sol.q, &centred_steps(model, alpha))],
        0.0,
    )?;
    let mu = gibbs_measure(&pot, &SubAlphabet::full(model.alphabet_size()))?;
    Ok(mu.entropy() / -mu.expectation(&phi)?)
}

/// Drift, full and recurrent dimensions, and the transient-set dimensions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GapReport {
    pub delta: f64,
    pub delta0: f64,
    pub gap: f64,
    /// `μ_{δφ}(ψ)`, which is also `α_max`.
    pub drift: f64,
    /// Dimension of the (uniformly) recurrent set, `δ₀`.
    pub recurrent_dimension: f64,
    /// Dimension of the orbits escaping to `+∞`.
    pub transient_plus: f64,
    /// Dimension of the orbits escaping to `-∞`.
    pub transient_minus: f64,
}

/// Drift `μ_{δφ}(ψ)` of the dimension-maximising measure.
pub fn drift(model: &BranchModel) -> Result<f64> {
    let delta = bowen_delta(model)?;
    let mu = gibbs_measure(
        &model.geometric_potential().scaled(delta),
        &SubAlphabet::full(model.alphabet_size()),
    )?;
    mu.expectation(&model.step_potential())
}

pub fn drift_and_gap(model: &BranchModel) -> Result<GapReport> {
    let delta = bowen_delta(model)?;
    let delta0 = delta_alpha_root(model, 0.0)?;
    let drift = drift(model)?;
    let (transient_plus, transient_minus) = if drift > 0.0 {
        (delta, delta0)
    } else if drift < 0.0 {
        (delta0, delta)
    } else {
        (delta0, delta0)
    };
    Ok(GapReport {
        delta,
        delta0,
        gap: delta - delta0,
        drift,
        recurrent_dimension: delta0,
        transient_plus,
        transient_minus,
    })
}

/// One row of a spectrum sweep. Method values are absent where the method
/// does not apply (endpoints, outside the step range) or failed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    /// Best available `δ_α`.
    pub delta: f64,
    pub delta_root: Option<f64>,
    pub delta_newton: Option<f64>,
    pub delta_legendre: Option<f64>,
    pub q_alpha: Option<f64>,
    pub slope: Option<f64>,
    /// Largest pairwise difference among the available method values.
    pub discrepancy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectrumSummary {
    pub alpha_max: f64,
    pub delta: f64,
    pub delta0: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectrumCurve {
    pub points: Vec<SpectrumPoint>,
    pub summary: SpectrumSummary,
}

impl SpectrumCurve {
    /// Number of strict local maxima of the `δ` column, ignoring points
    /// with errors and plateaus below `tol`.
    pub fn local_maxima(&self, tol: f64) -> Vec<f64> {
        let pts: Vec<&SpectrumPoint> = self.points.iter().filter(|p| p.error.is_none()).collect();
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let left = i == 0 || pts[i].delta > pts[i - 1].delta + tol;
            let right = i + 1 == pts.len() || pts[i].delta > pts[i + 1].delta + tol;
            let interior = i > 0 && i + 1 < pts.len();
            if left && right && interior {
                out.push(pts[i].alpha);
            }
        }
        out
    }

    /// Whether `δ` rises then falls along the grid.
    pub fn is_unimodal(&self, tol: f64) -> bool {
        let d: Vec<f64> = self.points.iter().filter(|p| p.error.is_none()).map(|p| p.delta).collect();
        let peak = d
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if *v > d[best] { i } else { best });
        d[..=peak].windows(2).all(|w| w[1] >= w[0] - tol) && d[peak..].windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

/// `n` evenly spaced points on `[ψ̲ + ε, ψ̄ - ε]`, `ε = 10⁻³ (ψ̄ - ψ̲)`,
/// followed by the two endpoints.
pub fn default_grid(model: &BranchModel, n: usize) -> Vec<f64> {
    let b = bounds(model);
    let eps = 1e-3 * b.width();
    let (lo, hi) = (b.lower + eps, b.upper - eps);
    let mut grid: Vec<f64> = match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    };
    grid.push(b.lower);
    grid.push(b.upper);
    grid
}

/// Evaluates every grid point (in parallel) and returns them sorted by `α`.
pub fn spectrum_sweep(model: &BranchModel, grid: &[f64]) -> Result<SpectrumCurve> {
    let mut points: Vec<SpectrumPoint> = grid.par_iter().map(|&a| spectrum_point(model, a)).collect();
    points.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let gap = drift_and_gap(model)?;
    Ok(SpectrumCurve {
        points,
        summary: SpectrumSummary {
            alpha_max: gap.drift,
            delta: gap.delta,
            delta0: gap.delta0,
            gap: gap.gap,
        },
    })
}

/// All three methods at one `α`, with errors recorded rather than raised.
pub fn spectrum_point(model: &BranchModel, alpha: f64) -> SpectrumPoint {
    let mut point = SpectrumPoint {
        alpha,
        delta: f64::NAN,
        delta_root: None,
        delta_newton: None,
        delta_legendre: None,
        q_alpha: None,
        slope: None,
        discrepancy: None,
        error: None,
    };
    let mut errors = Vec::new();
    match delta_alpha_root(model, alpha) {
        Ok(d) => point.delta_root = Some(d),
        Err(e) => errors.push(format!("root: {e}")),
    }
    if alpha_regime(model, alpha) == Regime::Interior {
        match delta_alpha_newton(model, alpha) {
            Ok(sol) => {
                point.delta_newton = Some(sol.delta);
                point.q_alpha = Some(sol.q);
                match slope_at(model, alpha, &sol) {
                    Ok(s) => point.slope = Some(s),
                    Err(e) => errors.push(format!("slope: {e}")),
                }
            }
            Err(e) => errors.push(format!("newton: {e}")),
        }
        match delta_alpha_legendre(model, alpha) {
            Ok(d) => point.delta_legendre = Some(d),
            Err(e) => errors.push(format!("legendre: {e}")),
        }
    }
    let values: Vec<f64> = [point.delta_root, point.delta_newton, point.delta_legendre]
        .into_iter()
        .flatten()
        .collect();
    if let Some(&first) = values.first() {
        point.delta = first;
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        point.discrepancy = Some(max - min);
    }
    if !errors.is_empty() {
        point.error = Some(errors.join("; "));
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rw(c1: f64, c2: f64) -> BranchModel {
        BranchModel::random_walk(c1, c2).unwrap()
    }

    fn three() -> BranchModel {
        let c = 1.0 / 3.0;
        BranchModel::from_pairs(&[(c, -1), (c, 1), (c, 1)]).unwrap()
    }

    #[test]
    fn root_examples() {
        assert_abs_diff_eq!(delta_alpha_root(&rw(0.5, 0.5), 0.0).unwrap(), 1.0, epsilon = 1e-13);
        let d0 = 4f64.ln() / (2.5f64.ln() + (5.0f64 / 3.0).ln());
        assert_abs_diff_eq!(delta_alpha_root(&rw(0.4, 0.6), 0.0).unwrap(), d0, epsilon = 1e-12);
        assert_abs_diff_eq!(d0, 0.971_395_468_660_336, epsilon = 1e-14);
        assert_eq!(delta_alpha_root(&rw(0.5, 0.5), 1.0).unwrap(), 0.0);
        assert_eq!(delta_alpha_root(&rw(0.5, 0.5), 2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            delta_alpha_root(&three(), 1.0).unwrap(),
            2f64.ln() / 3f64.ln(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn newton_examples() {
        let sol = delta_alpha_newton(&rw(0.5, 0.5), 0.0).unwrap();
        assert_abs_diff_eq!(sol.delta, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(sol.q, 0.0, epsilon = 1e-13);
        let sol = delta_alpha_newton(&rw(0.4, 0.6), 0.2).unwrap();
        assert_abs_diff_eq!(sol.delta, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.q, 0.0, epsilon = 1e-12);
        let sol = delta_alpha_newton(&three(), 0.999).unwrap();
        assert!((sol.delta - 2f64.ln() / 3f64.ln()).abs() < 5e-3);
        assert!(sol.residual < NEWTON_RESIDUAL);
        assert!(matches!(delta_alpha_newton(&rw(0.5, 0.5), 1.0), Err(Error::Regime(_))));
    }

    #[test]
    fn legendre_examples() {
        assert_abs_diff_eq!(delta_alpha_legendre(&rw(0.5, 0.5), 0.0).unwrap(), 1.0, epsilon = 1e-12);
        let m = rw(0.1, 0.5);
        let d = delta_alpha_legendre(&m, drift(&m).unwrap()).unwrap();
        assert_abs_diff_eq!(d, 0.519_463_232_007_944, epsilon = 1e-10);
        assert_abs_diff_eq!(drift(&m).unwrap(), 0.395_262_690_139_243, epsilon = 1e-12);
        let m = rw(0.4, 0.6);
        let a = delta_alpha_legendre(&m, 0.0).unwrap();
        let b = delta_alpha_root(&m, 0.0).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn sweep_examples() {
        let curve = spectrum_sweep(&rw(0.5, 0.5), &[-1.0, -0.5, 0.0, 0.5, 1.0, 2.0]).unwrap();
        let d: Vec<f64> = curve.points.iter().map(|p| p.delta).collect();
        let h = 0.811_278_124_459_133;
        for (got, want) in d.iter().zip([0.0, h, 1.0, h, 0.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        assert!(curve.points.iter().all(|p| p.error.is_none()));
        let m = BranchModel::from_pairs(&[(0.5, 0), (0.5, 1)]).unwrap();
        let curve = spectrum_sweep(&m, &[0.0, 0.5, 1.0]).unwrap();
        let d: Vec<f64> = curve.points.iter().map(|p| p.delta).collect();
        for (got, want) in d.iter().zip([0.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn gap_examples() {
        let g = drift_and_gap(&rw(0.5, 0.5)).unwrap();
        assert!(g.drift.abs() < 1e-14 && g.gap.abs() < 1e-12);
        assert_abs_diff_eq!(g.transient_plus, 1.0, epsilon = 1e-12);
        let g = drift_and_gap(&rw(0.4, 0.6)).unwrap();
        assert_abs_diff_eq!(g.drift, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(g.gap, 0.028_604_531_339_663_7, epsilon = 1e-11);
        assert_eq!(g.transient_plus, g.delta);
        assert_eq!(g.transient_minus, g.delta0);
        let g = drift_and_gap(&rw(0.3, 0.7)).unwrap();
        assert_abs_diff_eq!(g.delta0, 0.888_281_396_401_817, epsilon = 1e-11);
        assert_abs_diff_eq!(g.drift, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn slope_examples() {
        let m = rw(0.4, 0.6);
        assert!(spectrum_slope(&m, 0.2).unwrap().abs() < 1e-10);
        let m = rw(0.5, 0.5);
        let h = 1e-4;
        let fd = (delta_alpha_newton(&m, 0.5 + h).unwrap().delta - delta_alpha_newton(&m, 0.5 - h).unwrap().delta)
            / (2.0 * h);
        assert!((spectrum_slope(&m, 0.5).unwrap() - fd).abs() < 1e-6);
        // closed form: log((1-α)/(1+α)) / (2 log 2)
        let closed = |a: f64| ((1.0 - a) / (1.0 + a)).ln() / (2.0 * 2f64.ln());
        assert!((spectrum_slope(&m, 0.99).unwrap() - closed(0.99)).abs() < 1e-8);
        assert!(spectrum_slope(&m, 1.0 - 2e-7).unwrap() < -10.0);
    }

    #[test]
    fn young_formula() {
        assert_abs_diff_eq!(gibbs_dimension(&rw(0.5, 0.5), 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gibbs_dimension(&rw(0.4, 0.6), 0.2).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gibbs_dimension(&three(), 1.0 / 3.0).unwrap(), 1.0, epsilon = 1e-12);
        let m = rw(0.3, 0.7);
        for alpha in [-0.6, 0.1, 0.8] {
            let d = delta_alpha_newton(&m, alpha).unwrap().delta;
            assert!((gibbs_dimension(&m, alpha).unwrap() - d).abs() < 1e-9);
        }
    }
}
