//! The lifted interval map `F_Ψ` on `ℝ` and the conjugacy with the skew
//! product on `Σ × ℤ`.

use crate::error::{Error, Result};
use crate::symbolic::{BranchModel, Word};

/// Width of the excluded band around branch endpoints.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Largest cylinder width accepted as a resolved point.
const RESOLUTION: f64 = 1e-13;

/// A real number `cell + frac` with `frac ∈ [0, 1)` kept separately, so
/// that integer translations are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftPoint {
    pub cell: i64,
    pub frac: f64,
}

impl LiftPoint {
    pub fn new(x: f64) -> Self {
        let cell = x.floor();
        Self {
            cell: cell as i64,
            frac: x - cell,
        }
    }

    pub fn value(&self) -> f64 {
        self.cell as f64 + self.frac
    }

    /// One application of `F_Ψ`; also returns the branch used.
    pub fn step(&self, model: &BranchModel) -> Result<(LiftPoint, usize)> {
        let i = model
            .branch_containing(self.frac, BOUNDARY_GUARD)
            .ok_or(Error::EscapeFromRepeller(self.value()))?;
        let b = model.branches()[i];
        let image = (self.frac - b.left) / b.contraction;
        // image lies in (0, 1) up to round-off
        let shift = image.floor();
        Ok((
            LiftPoint {
                cell: self.cell + b.step + shift as i64,
                frac: image - shift,
            },
            i,
        ))
    }
}

/// `x₀, F_Ψ(x₀), …, F_Ψ^n(x₀)`.
pub fn iterate_interval_map(model: &BranchModel, x0: f64, n: usize) -> Result<Vec<LiftPoint>> {
    let mut orbit = Vec::with_capacity(n + 1);
    let mut x = LiftPoint::new(x0);
    orbit.push(x);
    for _ in 0..n {
        x = x.step(model)?.0;
        orbit.push(x);
    }
    Ok(orbit)
}

fn midpoint(model: &BranchModel, word: &[usize]) -> Result<(f64, f64)> {
    let g = model.cylinder_geometry(&Word::from(word))?;
    Ok((g.left + 0.5 * g.length, g.length))
}

/// `max_{j<=n} |F_Ψ^j(π(ω) + ℓ) - (π(σ^j ω) + ℓ + S_jψ(ω))|`, with each
/// `π(σ^j ω)` taken as the midpoint of the cylinder of the remaining
/// prefix.
pub fn conjugacy_check(model: &BranchModel, prefix: &Word, shift: i64, n: usize) -> Result<f64> {
    let w = prefix.symbols();
    if n > w.len() {
        return Err(Error::Validation(format!(
            "cannot follow {n} steps along a prefix of length {}",
            w.len()
        )));
    }
    let (x0, width) = midpoint(model, w)?;
    if width >= RESOLUTION {
        return Err(Error::Precision { len: w.len(), width });
    }
    let steps = model.steps();
    let mut x = LiftPoint { cell: shift, frac: x0 };
    let mut level = shift;
    let mut worst: f64 = 0.0;
    for j in 0..=n {
        let (mid, _) = midpoint(model, &w[j..])?;
        let dev = (x.cell - level) as f64 + (x.frac - mid);
        worst = worst.max(dev.abs());
        if j < n {
            let (next, branch) = x.step(model)?;
            if branch != w[j] {
                return Err(Error::EscapeFromRepeller(x.value()));
            }
            level += steps[w[j]];
            x = next;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn random_walk_orbit_of_one_third() {
        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        let orbit = iterate_interval_map(&m, 1.0 / 3.0, 4).unwrap();
        let cells: Vec<i64> = orbit.iter().map(|p| p.cell).collect();
        assert_eq!(cells, vec![0, -1, 0, -1, 0]);
        for (j, p) in orbit.iter().enumerate() {
            let want = if j % 2 == 0 { 1.0 / 3.0 } else { 2.0 / 3.0 };
            assert_abs_diff_eq!(p.frac, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn one_step_by_hand() {
        let m = BranchModel::random_walk(0.4, 0.6).unwrap();
        let orbit = iterate_interval_map(&m, 0.7, 1).unwrap();
        assert_eq!(orbit[1].cell, 1);
        assert_abs_diff_eq!(orbit[1].frac, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gaps_are_rejected() {
        let m = BranchModel::random_walk(0.4, 0.5).unwrap();
        // branches [0, 0.4] and [0.4, 0.9]; 0.95 is in the gap
        assert!(matches!(iterate_interval_map(&m, 0.95, 3), Err(Error::EscapeFromRepeller(_))));
        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        assert!(matches!(iterate_interval_map(&m, 0.5, 1), Err(Error::EscapeFromRepeller(_))));
    }

    #[test]
    fn conjugacy_on_alternating_prefix() {
        let m = BranchModel::random_walk(0.5, 0.5).unwrap();
        let prefix = Word::new((0..60).map(|i| i % 2).collect());
        let d = conjugacy_check(&m, &prefix, 0, 20).unwrap();
        assert!(d < 1e-9);
        let d3 = conjugacy_check(&m, &prefix, 3, 20).unwrap();
        assert_eq!(d, d3);
        assert_eq!(conjugacy_check(&m, &prefix, 0, 0).unwrap(), 0.0);
        let short = Word::new(vec![0, 1, 0]);
        assert!(matches!(conjugacy_check(&m, &short, 0, 1), Err(Error::Precision { .. })));
    }
}
