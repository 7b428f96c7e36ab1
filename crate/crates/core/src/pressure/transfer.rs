//! Transfer matrices on de Bruijn states and their Perron data.

use crate::error::{Error, Result};
use crate::symbolic::{index_word, word_index, CylinderPotential};

/// Power iteration stopping rule.
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    /// Relative change of successive eigenvalue estimates.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// Transfer matrix of a depth-`k` potential restricted to a sub-alphabet.
///
/// States are words of length `k-1` over the sub-alphabet (local indices);
/// state `a` followed by symbol `x` moves to `(a * |J| + x) mod |J|^{k-1}`
/// with weight `exp(f(a x) - shift)`.
#[derive(Debug, Clone)]
pub(crate) struct TransferMatrix {
    pub states: usize,
    pub branching: usize,
    /// `states * branching` entries, row-major.
    pub weights: Vec<f64>,
    /// Subtracted from every log-weight before exponentiation.
    pub shift: f64,
}

impl TransferMatrix {
    pub fn new(f: &CylinderPotential, symbols: &[usize]) -> Self {
        let k = f.depth();
        let j = symbols.len();
        let states = j.pow((k - 1) as u32);
        let mut logs = Vec::with_capacity(states * j);
        let mut global = vec![0; k];
        for a in 0..states {
            let local = index_word(a, k - 1, j);
            for (slot, &s) in global.iter_mut().zip(&local) {
                *slot = symbols[s];
            }
            for &x in symbols {
                global[k - 1] = x;
                logs.push(f.value_at(word_index(&global, f.alphabet_size())));
            }
        }
        let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights = logs.iter().map(|l| (l - shift).exp()).collect();
        Self {
            states,
            branching: j,
            weights,
            shift,
        }
    }

    #[inline]
    pub fn successor(&self, state: usize, x: usize) -> usize {
        (state * self.branching + x) % self.states
    }

    fn apply_right(&self, v: &[f64], out: &mut [f64]) {
        for (a, o) in out.iter_mut().enumerate() {
            let row = &self.weights[a * self.branching..(a + 1) * self.branching];
            *o = row
                .iter()
                .enumerate()
                .map(|(x, w)| w * v[self.successor(a, x)])
                .sum();
        }
    }

    fn apply_left(&self, u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (a, &ua) in u.iter().enumerate() {
            let row = &self.weights[a * self.branching..(a + 1) * self.branching];
            for (x, w) in row.iter().enumerate() {
                out[self.successor(a, x)] += ua * w;
            }
        }
    }

    /// Leading eigenvalue (of the shifted matrix) and its right eigenvector.
    pub fn perron_right(&self, opts: PowerIteration) -> Result<(f64, Vec<f64>, f64)> {
        self.power(opts, false)
    }

    pub fn perron_left(&self, opts: PowerIteration) -> Result<(f64, Vec<f64>, f64)> {
        self.power(opts, true)
    }

    /// Returns `(lambda, eigenvector normalised to unit l1 norm, residual)`.
    fn power(&self, opts: PowerIteration, left: bool) -> Result<(f64, Vec<f64>, f64)> {
        let n = self.states;
        let mut v = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let mut lambda = f64::NAN;
        let mut residual = f64::INFINITY;
        for _ in 0..opts.max_iter {
            if left {
                self.apply_left(&v, &mut next);
            } else {
                self.apply_right(&v, &mut next);
            }
            let norm: f64 = next.iter().sum();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::Convergence {
                    iterations: 0,
                    residual: f64::NAN,
                });
            }
            next.iter_mut().for_each(|x| *x /= norm);
            let change = v
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            residual = ((norm - lambda) / norm).abs();
            lambda = norm;
            std::mem::swap(&mut v, &mut next);
            if residual <= opts.tol && change <= opts.tol {
                return Ok((lambda, v, residual));
            }
        }
        Err(Error::Convergence {
            iterations: opts.max_iter,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_matrix_is_a_scalar() {
        let f = CylinderPotential::symbolwise(&[0.2f64.ln(), 0.3f64.ln()]);
        let t = TransferMatrix::new(&f, &[0, 1]);
        assert_eq!(t.states, 1);
        let (lambda, v, _) = t.perron_right(PowerIteration::default()).unwrap();
        assert!(((lambda * t.shift.exp()) - 0.5).abs() < 1e-15);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn golden_mean_like_spectral_radius() {
        // f(ab) = 0 except f(11) = -inf-ish: approximate the golden mean shift
        let f = CylinderPotential::new(2, 2, vec![0.0, 0.0, 0.0, -60.0]).unwrap();
        let t = TransferMatrix::new(&f, &[0, 1]);
        let (lambda, _, _) = t.perron_right(PowerIteration::default()).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((lambda * t.shift.exp() - golden).abs() < 1e-12);
    }
}
