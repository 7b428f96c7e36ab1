//! Full shift over a finite alphabet, affine branch systems and
//! cylinder-constant potentials.
//!
//! Symbols are 0-based indices into the branch list. A potential of depth
//! `k` stores one value per word of length `k`, laid out in lexicographic
//! order with the first symbol most significant.

use crate::error::{Error, Result};

const GEOMETRY_TOL: f64 = 1e-12;

/// Raw branch description as it appears in model files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSpec {
    pub contraction: f64,
    pub step: i64,
    /// Left endpoint of the branch interval. Auto-packed when absent.
    pub left: Option<f64>,
}

impl BranchSpec {
    pub fn new(contraction: f64, step: i64) -> Self {
        Self {
            contraction,
            step,
            left: None,
        }
    }

    pub fn at(contraction: f64, step: i64, left: f64) -> Self {
        Self {
            contraction,
            step,
            left: Some(left),
        }
    }
}

/// One affine full branch `h_i(x) = left + contraction * x` of the inverse map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub contraction: f64,
    pub step: i64,
    pub left: f64,
}

impl Branch {
    pub fn right(&self) -> f64 {
        self.left + self.contraction
    }
}

/// Expanding interval map with affine full branches together with its
/// integer step function.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchModel {
    branches: Vec<Branch>,
}

impl BranchModel {
    /// Validates a list of branch descriptions.
    ///
    /// Branches without an explicit left endpoint are placed at the sum of
    /// the contractions of all preceding branches.
    pub fn new(specs: &[BranchSpec]) -> Result<Self> {
        if specs.len() < 2 {
            return Err(Error::Alphabet(specs.len()));
        }
        let mut total = 0.0;
        let mut branches = Vec::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            let c = spec.contraction;
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::Range(format!(
                    "contraction of branch {i} is {c}, must lie in (0,1)"
                )));
            }
            let left = spec.left.unwrap_or(total);
            if !left.is_finite() || left < -GEOMETRY_TOL || left + c > 1.0 + GEOMETRY_TOL {
                return Err(Error::Range(format!(
                    "branch {i} interval [{left}, {}] leaves [0,1]",
                    left + c
                )));
            }
            total += c;
            branches.push(Branch {
                contraction: c,
                step: spec.step,
                left,
            });
        }
        if total > 1.0 + GEOMETRY_TOL {
            return Err(Error::Range(format!(
                "sum of contractions is {total}, must not exceed 1"
            )));
        }
        let mut order: Vec<usize> = (0..branches.len()).collect();
        order.sort_by(|&a, &b| branches[a].left.total_cmp(&branches[b].left));
        for pair in order.windows(2) {
            let (a, b) = (&branches[pair[0]], &branches[pair[1]]);
            if b.left < a.right() - GEOMETRY_TOL {
                return Err(Error::Overlap {
                    first: pair[0],
                    second: pair[1],
                });
            }
        }
        Ok(Self { branches })
    }

    /// Shorthand for auto-packed branches given as `(contraction, step)`.
    pub fn from_pairs(pairs: &[(f64, i64)]) -> Result<Self> {
        let specs: Vec<_> = pairs.iter().map(|&(c, m)| BranchSpec::new(c, m)).collect();
        Self::new(&specs)
    }

    /// Two branches with steps `-1` and `+1`.
    pub fn random_walk(c1: f64, c2: f64) -> Result<Self> {
        Self::from_pairs(&[(c1, -1), (c2, 1)])
    }

    pub fn alphabet_size(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn contractions(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.contraction).collect()
    }

    pub fn steps(&self) -> Vec<i64> {
        self.branches.iter().map(|b| b.step).collect()
    }

    /// `log c_i` on the one-cylinder of symbol `i`.
    pub fn geometric_potential(&self) -> CylinderPotential {
        CylinderPotential::symbolwise(
            &self
                .branches
                .iter()
                .map(|b| b.contraction.ln())
                .collect::<Vec<_>>(),
        )
    }

    /// The symbolic step length function.
    pub fn step_potential(&self) -> CylinderPotential {
        CylinderPotential::symbolwise(
            &self
                .branches
                .iter()
                .map(|b| b.step as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Length and left endpoint of `h_{w_1} ∘ … ∘ h_{w_n}([0,1])`.
    pub fn cylinder_geometry(&self, word: &Word) -> Result<CylinderGeometry> {
        word.validate(self.alphabet_size())?;
        let mut left = 0.0;
        let mut length = 1.0;
        for &s in word.symbols() {
            let b = &self.branches[s];
            left += length * b.left;
            length *= b.contraction;
        }
        Ok(CylinderGeometry { length, left })
    }

    /// Index of the branch whose open interval contains `x`, keeping a
    /// distance of at least `guard` from both endpoints.
    pub fn branch_containing(&self, x: f64, guard: f64) -> Option<usize> {
        self.branches
            .iter()
            .position(|b| x > b.left + guard && x < b.right() - guard)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGeometry {
    pub length: f64,
    pub left: f64,
}

/// Finite word over the alphabet; the empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, alphabet: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s >= alphabet) {
            Some(&symbol) => Err(Error::Symbol { symbol, alphabet }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

/// Lexicographic index of a word, first symbol most significant.
pub fn word_index(symbols: &[usize], alphabet: usize) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * alphabet + s)
}

/// Inverse of [`word_index`] for words of length `len`.
pub fn index_word(mut index: usize, len: usize, alphabet: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = index % alphabet;
        index /= alphabet;
    }
    w
}

/// Real function on the shift that is constant on cylinders of a fixed depth.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderPotential {
    alphabet: usize,
    depth: usize,
    values: Vec<f64>,
}

impl CylinderPotential {
    pub fn new(alphabet: usize, depth: usize, values: Vec<f64>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Alphabet(0));
        }
        if depth == 0 {
            return Err(Error::Depth("potential depth must be at least 1".into()));
        }
        let expected = alphabet
            .checked_pow(depth as u32)
            .ok_or_else(|| Error::Depth(format!("table for depth {depth} is too large")))?;
        if values.len() != expected {
            return Err(Error::Depth(format!(
                "expected {expected} values for depth {depth}, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Range(format!("potential value {v} is not finite")));
        }
        Ok(Self {
            alphabet,
            depth,
            values,
        })
    }

    /// Depth-1 potential with one value per symbol.
    pub fn symbolwise(values: &[f64]) -> Self {
        Self {
            alphabet: values.len(),
            depth: 1,
            values: values.to_vec(),
        }
    }

    pub fn constant(alphabet: usize, value: f64) -> Self {
        Self {
            alphabet,
            depth: 1,
            values: vec![value; alphabet],
        }
    }

    pub fn zero(alphabet: usize) -> Self {
        Self::constant(alphabet, 0.0)
    }

    pub fn from_fn(alphabet: usize, depth: usize, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let n = alphabet.pow(depth as u32);
        let values = (0..n).map(|i| f(&index_word(i, depth, alphabet))).collect();
        Self::new(alphabet, depth, values)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value on the cylinder of a word of exactly `depth` symbols.
    pub fn value(&self, window: &[usize]) -> f64 {
        debug_assert_eq!(window.len(), self.depth);
        self.values[word_index(window, self.alphabet)]
    }

    pub fn value_at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Same function written as a deeper table.
    pub fn lift(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::Depth(format!(
                "cannot lower depth {} to {depth}",
                self.depth
            )));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let extra = self.alphabet.pow((depth - self.depth) as u32);
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat(v).take(extra))
            .collect();
        Self::new(self.alphabet, depth, values)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }

    /// `Σ coef_j · pot_j + constant`, lifted to the largest depth involved.
    pub fn linear_combination(terms: &[(f64, &CylinderPotential)], constant: f64) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Depth("empty linear combination".into()))?;
        let alphabet = first.1.alphabet;
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.alphabet != alphabet) {
            return Err(Error::Depth(format!(
                "alphabet sizes {alphabet} and {} differ",
                p.alphabet
            )));
        }
        let depth = terms.iter().map(|(_, p)| p.depth).max().unwrap_or(1);
        let mut values = vec![constant; alphabet.pow(depth as u32)];
        for (coef, pot) in terms {
            let lifted = pot.lift(depth)?;
            for (acc, v) in values.iter_mut().zip(&lifted.values) {
                *acc += coef * v;
            }
        }
        Self::new(alphabet, depth, values)
    }

    pub fn plus(&self, other: &CylinderPotential) -> Result<Self> {
        Self::linear_combination(&[(1.0, self), (1.0, other)], 0.0)
    }

    /// Restriction check for the lattice dynamic program.
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| (v - v.round()).abs() <= 1e-12)
    }

    /// Sup over completions of the last `depth - 1` Birkhoff terms, indexed
    /// by the trailing `depth - 1` symbols of a word.
    pub fn tail_sup_table(&self) -> Vec<f64> {
        let k = self.depth;
        if k == 1 {
            return vec![0.0];
        }
        let r = self.alphabet;
        let states = r.pow((k - 1) as u32);
        (0..states)
            .map(|s| {
                let head = index_word(s, k - 1, r);
                (0..states)
                    .map(|c| {
                        let mut w = head.clone();
                        w.extend(index_word(c, k - 1, r));
                        (0..k - 1).map(|j| self.value(&w[j..j + k])).sum::<f64>()
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }
}

/// `S_ω f`: the sum of `f` along the shift orbit of the cylinder `[ω]`,
/// maximised over the cylinder.
///
/// For depth `k > 1` the last `k-1` terms depend on symbols past the end of
/// the word and are maximised jointly over all completions.
pub fn birkhoff_sum(f: &CylinderPotential, word: &Word) -> Result<f64> {
    word.validate(f.alphabet)?;
    let w = word.symbols();
    if w.is_empty() {
        return Ok(0.0);
    }
    let k = f.depth;
    if w.len() < k {
        return Err(Error::WordTooShort {
            len: w.len(),
            depth: k,
        });
    }
    let body: f64 = w.windows(k).map(|win| f.value(win)).sum();
    if k == 1 {
        return Ok(body);
    }
    let tail = f.tail_sup_table()[word_index(&w[w.len() - (k - 1)..], f.alphabet)];
    Ok(body + tail)
}

/// Range of asymptotic Birkhoff averages of a potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiBounds {
    pub lower: f64,
    pub upper: f64,
}

impl PsiBounds {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn contains_open(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            lower: self.lower + by,
            upper: self.upper + by,
        }
    }
}

/// Minimum and maximum asymptotic averages `S_n ψ / n`.
///
/// Depth 1 reads them off the value table; deeper potentials use Karp's
/// minimum mean cycle on the de Bruijn graph of `(depth-1)`-words.
pub fn psi_bounds(psi: &CylinderPotential) -> PsiBounds {
    if psi.depth == 1 {
        return PsiBounds {
            lower: psi.min_value(),
            upper: psi.max_value(),
        };
    }
    let lower = min_mean_cycle(psi, 1.0);
    let upper = -min_mean_cycle(psi, -1.0);
    PsiBounds { lower, upper }
}

/// Karp's algorithm on the de Bruijn graph whose edges are the words of
/// length `depth`, weighted by `sign * value`.
fn min_mean_cycle(psi: &CylinderPotential, sign: f64) -> f64 {
    let r = psi.alphabet;
    let k = psi.depth;
    let n = r.pow((k - 1) as u32);
    // dist[j][v]: minimum weight of a walk with exactly j edges from node 0 to v
    let mut dist = vec![vec![f64::INFINITY; n]; n + 1];
    dist[0][0] = 0.0;
    for j in 1..=n {
        for u in 0..n {
            let du = dist[j - 1][u];
            if du == f64::INFINITY {
                continue;
            }
            for x in 0..r {
                let edge = u * r + x;
                let v = edge % n;
                let w = du + sign * psi.values[edge];
                if w < dist[j][v] {
                    dist[j][v] = w;
                }
            }
        }
    }
    (0..n)
        .filter(|&v| dist[n][v].is_finite())
        .map(|v| {
            (0..n)
                .filter(|&j| dist[j][v].is_finite())
                .map(|j| (dist[n][v] - dist[j][v]) / (n - j) as f64)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}
