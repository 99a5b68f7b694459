//! Adaptive Simpson quadrature and safeguarded Newton root finding.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error: f64,
}

const MAX_DEPTH: u32 = 48;

struct Accumulator {
    value: f64,
    error: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn simpson_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut acc = Accumulator {
        value: 0.0,
        error: 0.0,
    };
    step(f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH, &mut acc);
    // depth exhaustion is tolerated as long as the summed estimate holds
    if acc.error > abs_tol || !acc.value.is_finite() {
        return Err(Error::Quadrature {
            estimate: acc.value,
            error_bound: acc.error,
        });
    }
    Ok(Integral {
        value: acc.value,
        error: acc.error,
    })
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`, using a
/// 64-panel Simpson pass to fix the absolute scale.
pub fn simpson_rel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<Integral> {
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut coarse = 0.0;
    for k in 0..panels {
        let x0 = a + h * k as f64;
        coarse += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
    }
    let scale = coarse.abs().max(f64::MIN_POSITIVE);
    simpson_abs(f, a, b, rel_tol * scale)
}

/// Integrates over consecutive pieces `[p0, p1], [p1, p2], ...`, splitting the
/// absolute tolerance equally.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, points: &[f64], abs_tol: f64) -> Result<Integral> {
    let pieces = points.len().saturating_sub(1).max(1);
    let tol = abs_tol / pieces as f64;
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
    };
    for w in points.windows(2) {
        let part = simpson_abs(f, w[0], w[1], tol)?;
        total.value += part.value;
        total.error += part.error;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Accumulator,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    if !(a < lm && lm < m && m < rm && rm < b) {
        // interval exhausted at machine precision
        acc.value += whole;
        return;
    }
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
        return;
    }
    step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
    step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

/// Root of `f` in `[lo, hi]`, where `f` returns `(value, derivative)` and has
/// opposite signs at the bracket ends. Newton steps that leave the bracket
/// fall back to bisection.
pub fn find_root<F: Fn(f64) -> (f64, f64)>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
) -> Result<f64> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!("root not bracketed in [{lo}, {hi}]")));
    }
    let rising = flo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == rising {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= abs_tol || hi - lo <= abs_tol {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = simpson_abs(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn smooth_integrand() {
        let r = simpson_rel(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-11).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-10);
        let r = simpson_rel(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-11).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-40.0f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn sqrt_cusp() {
        let r = simpson_rel(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn root_of_cubic() {
        let x = find_root(|x| (x * x * x - 2.0, 3.0 * x * x), 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(x, 2f64.powf(1.0 / 3.0), epsilon = 1e-13);
    }

    #[test]
    fn unbracketed_root_is_rejected() {
        assert!(find_root(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12).is_err());
    }
}
