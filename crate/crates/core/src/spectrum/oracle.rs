//! Closed-form spectra of three example families, used as test oracles.
//!
//! Each formula is an entropy over Lyapunov exponent quotient for a
//! Bernoulli measure with mean step `α`.

use crate::error::{Error, Result};
use crate::symbolic::{BranchModel, BranchSpec};

/// Parameters of one example family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Two branches `c₁, c₂`, steps `(-1, +1)`.
    A { c1: f64, c2: f64 },
    /// Two branches of equal contraction `c`, steps `m₁ < m₂`.
    B { c: f64, m1: i64, m2: i64 },
    /// `g₁` branches with step `-1` then `g₂` with step `+1`, all of
    /// contraction `c`.
    C { c: f64, g1: usize, g2: usize },
}

/// How the Bernoulli weights of a formula are attached to the branches.
///
/// For family A the published formula pairs the weight `(1+α)/2` with
/// `log(1/c₁)`, although branch 1 is the one stepping by `-1`. `AsPrinted`
/// keeps that pairing; `Reversed` attaches each weight to the branch whose
/// step it counts. Families B and C are symmetric in the contractions, so
/// for B the flag has no effect; for C `Reversed` swaps the roles of the
/// two groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    AsPrinted,
    Reversed,
}

fn xlogx(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

fn check_unit(c: f64) -> Result<()> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::Range(format!("contraction {c} not in (0, 1)")))
    }
}

impl Family {
    /// Validates the parameter domain.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::A { c1, c2 } => {
                check_unit(c1)?;
                check_unit(c2)?;
                if c1 + c2 > 1.0 + 1e-12 {
                    return Err(Error::Range(format!("c1 + c2 = {} exceeds 1", c1 + c2)));
                }
            }
            Family::B { c, m1, m2 } => {
                check_unit(c)?;
                if 2.0 * c > 1.0 + 1e-12 {
                    return Err(Error::Range(format!("2c = {} exceeds 1", 2.0 * c)));
                }
                if m1 >= m2 {
                    return Err(Error::Range(format!("need m1 < m2, got {m1}, {m2}")));
                }
            }
            Family::C { c, g1, g2 } => {
                check_unit(c)?;
                if g1 == 0 || g2 == 0 {
                    return Err(Error::Range("g1 and g2 must be at least 1".into()));
                }
                if (g1 + g2) as f64 * c > 1.0 + 1e-12 {
                    return Err(Error::Range(format!(
                        "slope 1/c = {} is below g1 + g2 = {}",
                        1.0 / c,
                        g1 + g2
                    )));
                }
            }
        }
        Ok(())
    }

    /// `[ψ̲, ψ̄]` of the family.
    pub fn step_range(&self) -> (f64, f64) {
        match *self {
            Family::A { .. } | Family::C { .. } => (-1.0, 1.0),
            Family::B { m1, m2, .. } => (m1 as f64, m2 as f64),
        }
    }

    /// The branch model the formula describes.
    pub fn model(&self) -> Result<BranchModel> {
        self.validate()?;
        match *self {
            Family::A { c1, c2 } => BranchModel::from_pairs(&[(c1, -1), (c2, 1)]),
            Family::B { c, m1, m2 } => BranchModel::from_pairs(&[(c, m1), (c, m2)]),
            Family::C { c, g1, g2 } => {
                let specs: Vec<BranchSpec> = (0..g1)
                    .map(|_| BranchSpec::new(c, -1))
                    .chain((0..g2).map(|_| BranchSpec::new(c, 1)))
                    .collect();
                BranchModel::new(&specs)
            }
        }
    }
}

/// The published closed-form value of `δ_α` for `α` in the step range.
pub fn closed_form_oracle(family: &Family, alpha: f64, orientation: Orientation) -> Result<f64> {
    family.validate()?;
    let (lo, hi) = family.step_range();
    if !(alpha >= lo && alpha <= hi) {
        return Err(Error::Range(format!("alpha {alpha} outside [{lo}, {hi}]")));
    }
    let value = match *family {
        Family::A { c1, c2 } => {
            let (plus, minus) = ((1.0 + alpha) / 2.0, (1.0 - alpha) / 2.0);
            let (w1, w2) = match orientation {
                Orientation::AsPrinted => (plus, minus),
                Orientation::Reversed => (minus, plus),
            };
            -(xlogx(plus) + xlogx(minus)) / (w1 * (1.0 / c1).ln() + w2 * (1.0 / c2).ln())
        }
        Family::B { c, m1, m2 } => {
            let span = (m2 - m1) as f64;
            let (p, q) = ((alpha - m1 as f64) / span, (m2 as f64 - alpha) / span);
            -(xlogx(p) + xlogx(q)) / (1.0 / c).ln()
        }
        Family::C { c, g1, g2 } => {
            let (a, b) = match orientation {
                Orientation::AsPrinted => (1.0 - alpha, 1.0 + alpha),
                Orientation::Reversed => (1.0 + alpha, 1.0 - alpha),
            };
            let (g1, g2) = (g1 as f64, g2 as f64);
            -(g1 * xlogx(a / (2.0 * g1)) + g2 * xlogx(b / (2.0 * g2))) / (1.0 / c).ln()
        }
    };
    Ok(value)
}

/// The orientation under which the oracle attains `delta` at `alpha_max`,
/// where the spectrum must reach the full dimension.
pub fn fit_orientation(family: &Family, alpha_max: f64, delta: f64) -> Result<Orientation> {
    let miss = |o| -> Result<f64> { Ok((closed_form_oracle(family, alpha_max, o)? - delta).abs()) };
    Ok(if miss(Orientation::AsPrinted)? <= miss(Orientation::Reversed)? {
        Orientation::AsPrinted
    } else {
        Orientation::Reversed
    })
}
