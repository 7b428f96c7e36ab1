use crate::error::{Error, Result};
use crate::symbolic::{index_word, word_index, CylinderPotential};

const MIXING_TOL: f64 = 1e-15;
const MIXING_MAX_STEPS: usize = 100_000;

/// Invariant Gibbs measure of a cylinder-constant potential on `J^ℕ`.
///
/// Stored as a stationary Markov chain of order `depth - 1` over the
/// sub-alphabet: a distribution on `(depth-1)`-words and a row-stochastic
/// table of next-symbol probabilities. For depth 1 there is a single empty
/// state and the chain is Bernoulli.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsMeasure {
    pub(crate) alphabet: usize,
    pub(crate) symbols: Vec<usize>,
    pub(crate) depth: usize,
    pub(crate) stationary: Vec<f64>,
    pub(crate) transition: Vec<f64>,
}

impl GibbsMeasure {
    /// Bernoulli measure with the given symbol probabilities over the full
    /// alphabet. Zero-probability symbols are dropped from the support.
    pub fn bernoulli(probabilities: &[f64]) -> Result<Self> {
        let total: f64 = probabilities.iter().sum();
        if probabilities.iter().any(|p| !(*p >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Range(format!(
                "probabilities {probabilities:?} do not form a distribution"
            )));
        }
        let symbols: Vec<usize> = (0..probabilities.len())
            .filter(|&i| probabilities[i] > 0.0)
            .collect();
        let transition = symbols.iter().map(|&i| probabilities[i] / total).collect();
        Ok(Self {
            alphabet: probabilities.len(),
            symbols,
            depth: 1,
            stationary: vec![1.0],
            transition,
        })
    }

    /// Point mass on the constant sequence `(i, i, …)`.
    pub fn dirac(alphabet: usize, symbol: usize) -> Result<Self> {
        if symbol >= alphabet {
            return Err(Error::Symbol { symbol, alphabet });
        }
        Ok(Self {
            alphabet,
            symbols: vec![symbol],
            depth: 1,
            stationary: vec![1.0],
            transition: vec![1.0],
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// Support sub-alphabet.
    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_dirac(&self) -> bool {
        self.symbols.len() == 1
    }

    /// Distribution over `(depth-1)`-words of the support.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Next-symbol probabilities, one row per state; `None` for depth 1.
    pub fn transition(&self) -> Option<&[f64]> {
        (self.depth > 1).then_some(&self.transition[..])
    }

    /// Probabilities of the `depth`-words of the support, in local
    /// lexicographic order.
    pub fn word_weights(&self) -> Vec<f64> {
        let j = self.symbols.len();
        let mut w = Vec::with_capacity(self.stationary.len() * j);
        for (a, &pa) in self.stationary.iter().enumerate() {
            for x in 0..j {
                w.push(pa * self.transition[a * j + x]);
            }
        }
        w
    }

    /// Symbol marginals over the full alphabet.
    pub fn symbol_marginals(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.alphabet];
        for &s in &self.symbols {
            out[s] = self.cylinder_measure(&[s]);
        }
        out
    }

    /// Measure-theoretic entropy `h(μ)` (entropy rate of the chain), with
    /// `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        let j = self.symbols.len();
        -self
            .stationary
            .iter()
            .enumerate()
            .map(|(a, &pa)| {
                pa * self.transition[a * j..(a + 1) * j]
                    .iter()
                    .filter(|&&p| p > 0.0)
                    .map(|p| p * p.ln())
                    .sum::<f64>()
            })
            .sum::<f64>()
    }

    pub(crate) fn next_state(&self, state: usize, x: usize) -> usize {
        let n = self.stationary.len();
        (state * self.symbols.len() + x) % n
    }

    fn local(&self, symbol: usize) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }

    /// `μ([ω])` for a word of global symbols.
    pub fn cylinder_measure(&self, word: &[usize]) -> f64 {
        let Some(local) = word.iter().map(|&s| self.local(s)).collect::<Option<Vec<_>>>() else {
            return 0.0;
        };
        let j = self.symbols.len();
        let head = self.depth - 1;
        if local.len() <= head {
            let span = j.pow((head - local.len()) as u32);
            let start = word_index(&local, j) * span;
            return self.stationary[start..start + span].iter().sum();
        }
        let mut state = word_index(&local[..head], j);
        let mut p = self.stationary[state];
        for &x in &local[head..] {
            p *= self.transition[state * j + x];
            state = self.next_state(state, x);
        }
        p
    }

    /// Measure of every word of length `len` over the support (local order).
    fn window_weights(&self, len: usize) -> Vec<f64> {
        let j = self.symbols.len();
        if len == self.depth {
            return self.word_weights();
        }
        (0..j.pow(len as u32))
            .map(|i| {
                let w: Vec<usize> = index_word(i, len, j)
                    .into_iter()
                    .map(|x| self.symbols[x])
                    .collect();
                self.cylinder_measure(&w)
            })
            .collect()
    }

    /// Values of `g` on the local windows of length `len >= g.depth()`.
    fn window_values(&self, g: &CylinderPotential, len: usize) -> Vec<f64> {
        let j = self.symbols.len();
        let d = g.depth();
        (0..j.pow(len as u32))
            .map(|i| {
                let w: Vec<usize> = index_word(i, len, j)
                    .into_iter()
                    .map(|x| self.symbols[x])
                    .collect();
                g.value(&w[..d])
            })
            .collect()
    }

    /// `∫ g dμ`.
    pub fn expectation(&self, g: &CylinderPotential) -> Result<f64> {
        self.check_alphabet(g)?;
        let len = self.depth.max(g.depth());
        let weights = self.window_weights(len);
        let values = self.window_values(g, len);
        Ok(weights.iter().zip(&values).map(|(w, v)| w * v).sum())
    }

    /// Asymptotic covariance `lim Cov(S_n g, S_n h) / n`, the mixed second
    /// derivative of the pressure at the potential defining this measure.
    pub fn asymptotic_covariance(&self, g: &CylinderPotential, h: &CylinderPotential) -> Result<f64> {
        self.check_alphabet(g)?;
        self.check_alphabet(h)?;
        let len = self.depth.max(g.depth()).max(h.depth());
        let weights = self.window_weights(len);
        let center = |vals: Vec<f64>| {
            let mean: f64 = weights.iter().zip(&vals).map(|(w, v)| w * v).sum();
            vals.into_iter().map(|v| v - mean).collect::<Vec<_>>()
        };
        let gc = center(self.window_values(g, len));
        let hc = center(self.window_values(h, len));
        let inner = |a: &[f64], b: &[f64]| -> f64 {
            weights.iter().zip(a.iter().zip(b)).map(|(w, (x, y))| w * x * y).sum()
        };
        let mut total = inner(&gc, &hc);
        if self.depth == 1 && len == 1 {
            return Ok(total);
        }
        let g_future = self.future_sum(&gc, len)?;
        let h_future = self.future_sum(&hc, len)?;
        total += inner(&gc, &h_future) + inner(&hc, &g_future);
        Ok(total)
    }

    /// `Σ_{j>=1} Q^j y` for the chain on `len`-windows.
    fn future_sum(&self, y: &[f64], len: usize) -> Result<Vec<f64>> {
        let j = self.symbols.len();
        let windows = j.pow(len as u32);
        let states = self.stationary.len();
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut cur = y.to_vec();
        let mut acc = vec![0.0; windows];
        let mut next = vec![0.0; windows];
        for _ in 0..MIXING_MAX_STEPS {
            for (w, out) in next.iter_mut().enumerate() {
                let state = w % states;
                let base = (w * j) % windows;
                *out = (0..j)
                    .map(|x| self.transition[state * j + x] * cur[base + x])
                    .sum();
            }
            std::mem::swap(&mut cur, &mut next);
            let size = cur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            acc.iter_mut().zip(&cur).for_each(|(a, c)| *a += c);
            if size <= MIXING_TOL * scale {
                return Ok(acc);
            }
        }
        Err(Error::Convergence {
            iterations: MIXING_MAX_STEPS,
            residual: cur.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        })
    }

    pub(crate) fn check_alphabet(&self, g: &CylinderPotential) -> Result<()> {
        if g.alphabet_size() != self.alphabet {
            return Err(Error::Depth(format!(
                "potential alphabet {} does not match measure alphabet {}",
                g.alphabet_size(),
                self.alphabet
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_cylinders_multiply() {
        let mu = GibbsMeasure::bernoulli(&[0.4, 0.6]).unwrap();
        assert!((mu.cylinder_measure(&[0, 1, 1]) - 0.4 * 0.36).abs() < 1e-16);
        assert_eq!(mu.cylinder_measure(&[]), 1.0);
        assert!(GibbsMeasure::bernoulli(&[0.5, 0.6]).is_err());
    }

    #[test]
    fn entropy_of_bernoulli_and_dirac() {
        let mu = GibbsMeasure::bernoulli(&[0.25, 0.75]).unwrap();
        let h = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((mu.entropy() - h).abs() < 1e-15);
        assert_eq!(GibbsMeasure::dirac(3, 2).unwrap().entropy(), 0.0);
    }

    #[test]
    fn dirac_measure_support() {
        let mu = GibbsMeasure::dirac(2, 1).unwrap();
        assert_eq!(mu.cylinder_measure(&[1, 1, 1]), 1.0);
        assert_eq!(mu.cylinder_measure(&[1, 0]), 0.0);
        assert!(mu.is_dirac());
    }

    #[test]
    fn bernoulli_variance() {
        let mu = GibbsMeasure::bernoulli(&[0.4, 0.6]).unwrap();
        let psi = CylinderPotential::symbolwise(&[-1.0, 1.0]);
        assert!((mu.expectation(&psi).unwrap() - 0.2).abs() < 1e-15);
        let var = mu.asymptotic_covariance(&psi, &psi).unwrap();
        assert!((var - (1.0 - 0.04)).abs() < 1e-14);
    }

    #[test]
    fn deeper_test_function_on_bernoulli_has_no_extra_covariance() {
        // g(ab) = [a == b]; under Bernoulli(1/2,1/2) the sequence g_j is
        // 1-dependent with Cov(g_0, g_1) = 0, so the variance is 1/4.
        let mu = GibbsMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        let g = CylinderPotential::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((mu.expectation(&g).unwrap() - 0.5).abs() < 1e-15);
        let var = mu.asymptotic_covariance(&g, &g).unwrap();
        assert!((var - 0.25).abs() < 1e-14, "{var}");
    }
}
