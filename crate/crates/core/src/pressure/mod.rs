//! Classical topological pressure, Gibbs measures and the Bowen root.
//!
//! Depth-1 potentials are handled in closed form (`log Σ_{i∈J} e^{f_i}`);
//! deeper ones through the Perron root of the transfer matrix on
//! `(depth-1)`-words, found by power iteration.

mod gibbs;
mod transfer;

pub use gibbs::GibbsMeasure;
pub use transfer::PowerIteration;

use crate::error::{Error, Result};
use crate::solve::{bracket_sign_change, log_sum_exp, safeguarded_newton, Tolerance};
use crate::symbolic::{birkhoff_sum, index_word, BranchModel, CylinderPotential, Word};
use transfer::TransferMatrix;

/// How a pressure value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureMethod {
    ExactDepth1,
    SpectralDepthK,
    Empirical { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureValue {
    pub value: f64,
    pub method: PressureMethod,
    /// Convergence estimate; zero for closed forms. For empirical values
    /// the distance to the limit.
    pub residual: f64,
}

/// Non-empty subset `J` of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubAlphabet(Vec<usize>);

impl SubAlphabet {
    pub fn new(mut symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(Error::Validation("sub-alphabet must not be empty".into()));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::Symbol { symbol, alphabet });
        }
        Ok(Self(symbols))
    }

    pub fn full(alphabet: usize) -> Self {
        Self((0..alphabet).collect())
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }
}

/// `𝔓(f, J)`.
pub fn classical_pressure(f: &CylinderPotential, sub: &SubAlphabet) -> Result<PressureValue> {
    classical_pressure_with(f, sub, PowerIteration::default())
}

pub fn classical_pressure_with(
    f: &CylinderPotential,
    sub: &SubAlphabet,
    opts: PowerIteration,
) -> Result<PressureValue> {
    check_sub(f, sub)?;
    let symbols = sub.symbols();
    if sub.is_singleton() {
        let word = vec![symbols[0]; f.depth()];
        return Ok(PressureValue {
            value: f.value(&word),
            method: PressureMethod::ExactDepth1,
            residual: 0.0,
        });
    }
    if f.depth() == 1 {
        return Ok(PressureValue {
            value: log_sum_exp(symbols.iter().map(|&i| f.value_at(i))),
            method: PressureMethod::ExactDepth1,
            residual: 0.0,
        });
    }
    let t = TransferMatrix::new(f, symbols);
    let (lambda, _, residual) = t.perron_right(opts)?;
    Ok(PressureValue {
        value: lambda.ln() + t.shift,
        method: PressureMethod::SpectralDepthK,
        residual,
    })
}

/// `𝔓(f)` over the full alphabet.
pub fn pressure(f: &CylinderPotential) -> Result<f64> {
    Ok(classical_pressure(f, &SubAlphabet::full(f.alphabet_size()))?.value)
}

fn check_sub(f: &CylinderPotential, sub: &SubAlphabet) -> Result<()> {
    match sub.symbols().iter().find(|&&s| s >= f.alphabet_size()) {
        Some(&symbol) => Err(Error::Symbol {
            symbol,
            alphabet: f.alphabet_size(),
        }),
        None => Ok(()),
    }
}

/// The Gibbs measure `μ_{f,J}`; a Dirac mass when `J` is a singleton.
pub fn gibbs_measure(f: &CylinderPotential, sub: &SubAlphabet) -> Result<GibbsMeasure> {
    check_sub(f, sub)?;
    let alphabet = f.alphabet_size();
    let symbols = sub.symbols().to_vec();
    if sub.is_singleton() {
        return GibbsMeasure::dirac(alphabet, symbols[0]);
    }
    if f.depth() == 1 {
        let p = log_sum_exp(symbols.iter().map(|&i| f.value_at(i)));
        let mut weights: Vec<f64> = symbols.iter().map(|&i| (f.value_at(i) - p).exp()).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        return Ok(GibbsMeasure {
            alphabet,
            symbols,
            depth: 1,
            stationary: vec![1.0],
            transition: weights,
        });
    }
    let t = TransferMatrix::new(f, &symbols);
    let opts = PowerIteration::default();
    let (lambda, right, _) = t.perron_right(opts)?;
    let (_, left, _) = t.perron_left(opts)?;
    let j = symbols.len();
    let mut transition = vec![0.0; t.states * j];
    for a in 0..t.states {
        let row = &mut transition[a * j..(a + 1) * j];
        for (x, p) in row.iter_mut().enumerate() {
            *p = t.weights[a * j + x] * right[t.successor(a, x)] / (lambda * right[a]);
        }
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= total);
    }
    let mut stationary: Vec<f64> = left.iter().zip(&right).map(|(u, v)| u * v).collect();
    let total: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|p| *p /= total);
    Ok(GibbsMeasure {
        alphabet,
        symbols,
        depth: f.depth(),
        stationary,
        transition,
    })
}

/// `μ(g)`; by the derivative formula this is `d/dt 𝔓(f + t g)` at `t = 0`
/// when `μ = μ_f`.
pub fn gibbs_expectation(mu: &GibbsMeasure, g: &CylinderPotential) -> Result<f64> {
    mu.expectation(g)
}

/// Root `s` of `𝔓(s·phi + base) + offset = 0` for a strictly negative `phi`.
pub fn zero_pressure_exponent(
    phi: &CylinderPotential,
    base: &CylinderPotential,
    offset: f64,
) -> Result<f64> {
    if phi.max_value() >= 0.0 {
        return Err(Error::Range("phi must be strictly negative".into()));
    }
    let full = SubAlphabet::full(phi.alphabet_size());
    let eval = |s: f64| -> Result<(f64, f64)> {
        let pot = CylinderPotential::linear_combination(&[(s, phi), (1.0, base)], 0.0)?;
        let value = classical_pressure(&pot, &full)?.value + offset;
        let slope = gibbs_measure(&pot, &full)?.expectation(phi)?;
        Ok((value, slope))
    };
    let (lo, hi) = bracket_sign_change(|s| Ok(eval(s)?.0), 0.0, 1.0, 1e8)?;
    safeguarded_newton(eval, lo, hi, Tolerance::default())
}

/// Hausdorff dimension of the repeller: the zero of `s ↦ 𝔓(s φ)`.
pub fn bowen_delta(model: &BranchModel) -> Result<f64> {
    let phi = model.geometric_potential();
    zero_pressure_exponent(&phi, &CylinderPotential::zero(model.alphabet_size()), 0.0)
}

/// Default cap on `|I|^n` for exhaustive enumeration.
pub const ENUMERATION_CAP: u128 = 1 << 22;

/// Finite-`n` quotient `(1/n) log Σ_{ω∈I^n} exp(S_ω f)`.
///
/// Enumerates the words when `|I|^n <= cap`, otherwise evaluates the same
/// sum with a transfer-matrix recursion.
pub fn empirical_pressure(f: &CylinderPotential, n: usize, cap: u128) -> Result<PressureValue> {
    let count = (f.alphabet_size() as u128).checked_pow(n as u32);
    let value = match count {
        Some(c) if c <= cap => enumerated_log_sum(f, n)? / n as f64,
        _ => transfer_log_sum(f, n)? / n as f64,
    };
    finish_empirical(f, n, value)
}

/// Like [`empirical_pressure`] but always enumerates; fails with a budget
/// error beyond `cap` words.
pub fn empirical_pressure_enumerated(
    f: &CylinderPotential,
    n: usize,
    cap: u128,
) -> Result<PressureValue> {
    let count = (f.alphabet_size() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::Budget {
            requested: count,
            budget: cap,
        });
    }
    let value = enumerated_log_sum(f, n)? / n as f64;
    finish_empirical(f, n, value)
}

fn finish_empirical(f: &CylinderPotential, n: usize, value: f64) -> Result<PressureValue> {
    let limit = pressure(f)?;
    Ok(PressureValue {
        value,
        method: PressureMethod::Empirical { n },
        residual: (value - limit).abs(),
    })
}

fn enumerated_log_sum(f: &CylinderPotential, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Validation("horizon must be at least 1".into()));
    }
    let r = f.alphabet_size();
    let sums = (0..r.pow(n as u32))
        .map(|i| birkhoff_sum(f, &Word::new(index_word(i, n, r))))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_sum_exp(sums))
}

fn transfer_log_sum(f: &CylinderPotential, n: usize) -> Result<f64> {
    let k = f.depth();
    if n < k {
        return Err(Error::WordTooShort { len: n, depth: k });
    }
    let r = f.alphabet_size();
    let states = r.pow((k - 1) as u32);
    let tail = f.tail_sup_table();
    let mut v = vec![1.0; states];
    let mut next = vec![0.0; states];
    let mut log_scale = 0.0;
    let shift = f.max_value();
    for _ in 0..n - (k - 1) {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (a, &va) in v.iter().enumerate() {
            for x in 0..r {
                let word = a * r + x;
                next[word % states] += va * (f.value_at(word) - shift).exp();
            }
        }
        let m = next.iter().copied().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= m);
        log_scale += m.ln() + shift;
        std::mem::swap(&mut v, &mut next);
    }
    Ok(log_scale + log_sum_exp(v.iter().zip(&tail).map(|(x, t)| x.ln() + t)))
}

/// Largest deviation of `μ_f([ω]) / exp(S_ω f - n𝔓(f))` from 1 (as
/// `max(ratio, 1/ratio)`) over all words of length `n`.
pub fn gibbs_constant(f: &CylinderPotential, n: usize, cap: u128) -> Result<f64> {
    let r = f.alphabet_size();
    let count = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::Budget {
            requested: count,
            budget: cap,
        });
    }
    let full = SubAlphabet::full(r);
    let p = classical_pressure(f, &full)?.value;
    let mu = gibbs_measure(f, &full)?;
    let mut worst: f64 = 1.0;
    for i in 0..r.pow(n as u32) {
        let w = index_word(i, n, r);
        let ratio = mu.cylinder_measure(&w) / (birkhoff_sum(f, &Word::new(w))? - n as f64 * p).exp();
        worst = worst.max(ratio).max(1.0 / ratio);
    }
    Ok(worst)
}

/// Mixed second derivative of the pressure at `f`:
/// `∂²/∂s∂t 𝔓(f + s g + t h)` at zero.
pub fn pressure_hessian(
    f: &CylinderPotential,
    g: &CylinderPotential,
    h: &CylinderPotential,
) -> Result<f64> {
    gibbs_measure(f, &SubAlphabet::full(f.alphabet_size()))?.asymptotic_covariance(g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn full(r: usize) -> SubAlphabet {
        SubAlphabet::full(r)
    }

    #[test]
    fn classical_pressure_examples() {
        let zero = CylinderPotential::zero(2);
        let p = classical_pressure(&zero, &full(2)).unwrap();
        assert_abs_diff_eq!(p.value, 2f64.ln(), epsilon = 1e-15);
        assert_eq!(p.method, PressureMethod::ExactDepth1);
        assert_eq!(p.residual, 0.0);

        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(pressure(&m.geometric_potential()).unwrap(), 0.0, epsilon = 1e-15);

        // log(0.4 e^{-0.3} + 0.6 e^{0.3}), recomputed independently
        let m = BranchModel::random_walk(0.4, 0.6).unwrap();
        let f = CylinderPotential::linear_combination(
            &[(1.0, &m.geometric_potential()), (0.3, &m.step_potential())],
            0.0,
        )
        .unwrap();
        let expected = (0.4 * (-0.3f64).exp() + 0.6 * 0.3f64.exp()).ln();
        assert_abs_diff_eq!(pressure(&f).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.100_969_203_480_889, epsilon = 1e-14);
    }

    #[test]
    fn singleton_pressure_is_the_fixed_point_value() {
        let f = CylinderPotential::symbolwise(&[-0.7, 0.25]);
        let j = SubAlphabet::new(vec![1], 2).unwrap();
        assert_eq!(classical_pressure(&f, &j).unwrap().value, 0.25);
        let deep = CylinderPotential::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(classical_pressure(&deep, &j).unwrap().value, 4.0);
        assert!(SubAlphabet::new(vec![], 2).is_err());
        assert!(SubAlphabet::new(vec![2], 2).is_err());
    }

    #[test]
    fn lifted_potential_has_the_same_pressure() {
        let f = CylinderPotential::symbolwise(&[0.1, -0.4, 0.9]);
        let p1 = pressure(&f).unwrap();
        for depth in 2..=4 {
            let pk = classical_pressure(&f.lift(depth).unwrap(), &full(3)).unwrap();
            assert_eq!(pk.method, PressureMethod::SpectralDepthK);
            assert_abs_diff_eq!(pk.value, p1, epsilon = 1e-12);
        }
    }

    #[test]
    fn gibbs_measure_examples() {
        let mu = gibbs_measure(&CylinderPotential::zero(2), &full(2)).unwrap();
        assert_eq!(mu.word_weights(), vec![0.5, 0.5]);

        let m = BranchModel::random_walk(0.4, 0.6).unwrap();
        let mu = gibbs_measure(&m.geometric_potential(), &full(2)).unwrap();
        let w = mu.word_weights();
        assert_abs_diff_eq!(w[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 0.6, epsilon = 1e-15);

        let dirac = gibbs_measure(&CylinderPotential::zero(2), &SubAlphabet::new(vec![1], 2).unwrap()).unwrap();
        assert!(dirac.is_dirac());
        assert_eq!(dirac.cylinder_measure(&[1, 1, 1, 1]), 1.0);
    }

    #[test]
    fn gibbs_expectation_examples() {
        let psi = CylinderPotential::symbolwise(&[-1.0, 1.0]);
        let half = GibbsMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        assert_eq!(gibbs_expectation(&half, &psi).unwrap(), 0.0);
        let tilted = GibbsMeasure::bernoulli(&[0.4, 0.6]).unwrap();
        assert_abs_diff_eq!(gibbs_expectation(&tilted, &psi).unwrap(), 0.2, epsilon = 1e-15);
        let third = 1.0 / 3.0;
        let uniform = GibbsMeasure::bernoulli(&[third, third, third]).unwrap();
        let psi3 = CylinderPotential::symbolwise(&[-1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(gibbs_expectation(&uniform, &psi3).unwrap(), third, epsilon = 1e-15);
    }

    #[test]
    fn deep_gibbs_measure_is_stationary_and_has_the_gibbs_property() {
        let f = CylinderPotential::new(2, 3, vec![0.3, -0.2, 0.1, 0.5, -0.6, 0.0, 0.2, -0.1]).unwrap();
        let mu = gibbs_measure(&f, &full(2)).unwrap();
        let pi = mu.stationary();
        let p = mu.transition().unwrap();
        assert_abs_diff_eq!(pi.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let mut pushed = vec![0.0; pi.len()];
        for a in 0..pi.len() {
            for x in 0..2 {
                pushed[mu.next_state(a, x)] += pi[a] * p[a * 2 + x];
            }
        }
        for (a, b) in pushed.iter().zip(pi) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let c = gibbs_constant(&f, 10, ENUMERATION_CAP).unwrap();
        let c_short = gibbs_constant(&f, 5, ENUMERATION_CAP).unwrap();
        // bounded distortion: the constant does not grow with n
        assert!(c < 10.0 && (c / c_short) < 1.5, "{c} {c_short}");
    }

    #[test]
    fn depth_one_gibbs_constant_is_one() {
        let f = CylinderPotential::symbolwise(&[0.4f64.ln(), 0.1]);
        assert_abs_diff_eq!(gibbs_constant(&f, 8, ENUMERATION_CAP).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bowen_delta_examples() {
        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(bowen_delta(&m).unwrap(), 1.0, epsilon = 1e-14);
        // frozen from an mpmath root of 0.1^s + 0.5^s = 1
        let m = BranchModel::from_pairs(&[(0.1, -1), (0.5, 1)]).unwrap();
        let d = bowen_delta(&m).unwrap();
        assert_abs_diff_eq!(d, 0.519_463_232_007_944, epsilon = 1e-13);
        assert!(pressure(&m.geometric_potential().scaled(d)).unwrap().abs() < 1e-12);
        let third = 1.0 / 3.0;
        let m = BranchModel::from_pairs(&[(third, -1), (third, 1), (third, 1)]).unwrap();
        assert_abs_diff_eq!(bowen_delta(&m).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn empirical_pressure_examples() {
        let zero = CylinderPotential::zero(2);
        let p = empirical_pressure(&zero, 5, ENUMERATION_CAP).unwrap();
        assert_abs_diff_eq!(p.value, 2f64.ln(), epsilon = 1e-15);
        assert_eq!(p.method, PressureMethod::Empirical { n: 5 });

        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        let p = empirical_pressure(&m.geometric_potential(), 10, ENUMERATION_CAP).unwrap();
        assert_abs_diff_eq!(p.value, 0.0, epsilon = 1e-15);

        let m = BranchModel::random_walk(0.4, 0.6).unwrap();
        let p = empirical_pressure(&m.geometric_potential(), 12, ENUMERATION_CAP).unwrap();
        assert!(p.value.abs() < 1e-14);
        assert!(p.residual < 1e-14);

        assert!(matches!(
            empirical_pressure_enumerated(&zero, 30, ENUMERATION_CAP),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn transfer_sum_agrees_with_enumeration_for_deep_potentials() {
        let f = CylinderPotential::new(2, 2, vec![0.3, -1.2, 0.7, 0.1]).unwrap();
        for n in 2..=12 {
            let a = enumerated_log_sum(&f, n).unwrap();
            let b = transfer_log_sum(&f, n).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
    }
}
