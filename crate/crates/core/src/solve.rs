//! Scalar root finding and minimisation.

use crate::error::{Error, Result};

/// Stopping rule for the iterative scalar solvers.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Absolute step / bracket width.
    pub x: f64,
    /// Absolute residual; `0.0` disables the residual test.
    pub f: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            x: 1e-15,
            f: 0.0,
            max_iter: 200,
        }
    }
}

/// Newton's method kept inside a sign-change bracket; any step that leaves
/// the bracket (or has a useless derivative) is replaced by bisection.
///
/// `f` returns the value and the derivative.
pub fn safeguarded_newton<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (f_lo, _) = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] ({f_lo}, {f_hi})"
        )));
    }
    let lo_sign = f_lo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..tol.max_iter {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 || fx.abs() < tol.f {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= tol.x * (1.0 + x.abs()) || hi - lo <= tol.x * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Grows `[a, b]` geometrically in both directions until `g` changes sign,
/// never beyond `|x| <= limit`.
pub fn bracket_sign_change<G>(mut g: G, a: f64, b: f64, limit: f64) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut ga = g(a)?;
    let mut gb = g(b)?;
    loop {
        if ga == 0.0 || gb == 0.0 || ga.signum() != gb.signum() {
            return Ok((a, b));
        }
        if a <= -limit && b >= limit {
            return Err(Error::Bracket(format!(
                "no sign change within |x| <= {limit}"
            )));
        }
        let width = b - a;
        // grow towards the side where |g| is smaller, keeping the other end
        if (ga.abs() < gb.abs() && a > -limit) || b >= limit {
            a = (a - width).max(-limit);
            ga = g(a)?;
        } else {
            b = (b + width).min(limit);
            gb = g(b)?;
        }
    }
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok((x, fx))
}

/// Numerically stable `log Σ exp(x_i)`.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_cube_root() {
        let r = safeguarded_newton(
            |x| Ok((x * x * x - 2.0, 3.0 * x * x)),
            0.0,
            4.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_zero_derivative() {
        // derivative vanishes at the midpoint start
        let r = safeguarded_newton(
            |x: f64| Ok(((x - 0.3).powi(3), 3.0 * (x - 0.3).powi(2))),
            -1.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r - 0.3).abs() < 1e-4);
    }

    #[test]
    fn newton_rejects_missing_bracket() {
        let r = safeguarded_newton(|x| Ok((x * x + 1.0, 2.0 * x)), -1.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Bracket(_))));
    }

    #[test]
    fn bracket_expands_to_distant_root() {
        let (a, b) = bracket_sign_change(|x| Ok(x - 37.5), -1.0, 1.0, 1e3).unwrap();
        assert!(a <= 37.5 && b >= 37.5);
        assert!(bracket_sign_change(|x| Ok(x * x + 1.0), -1.0, 1.0, 100.0).is_err());
    }

    #[test]
    fn golden_section_minimum() {
        let (x, fx) = golden_section(|x| Ok((x - 1.25).powi(2) + 3.0), -4.0, 5.0, 1e-10).unwrap();
        // flatness at the minimum limits the abscissa to about sqrt(eps)
        assert!((x - 1.25).abs() < 1e-6);
        assert!((fx - 3.0).abs() < 1e-15);
    }

    #[test]
    fn log_sum_exp_is_stable() {
        assert!((log_sum_exp([1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(std::iter::empty()), f64::NEG_INFINITY);
    }
}
