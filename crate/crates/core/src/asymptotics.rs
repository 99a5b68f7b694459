//! Closed-form and quadrature constants for the nearest-neighbor tour
//! length, plus the optimal-tour limit used as a comparison target.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::numeric::{find_root, simpson_abs, simpson_pieces};
use crate::special::gamma;

/// `K_alpha = ((1+a)/C)^(1/(1+a)) (1+a)/a Gamma(1 + 1/(1+a))`, the constant in
/// `T / n^(a/(1+a)) -> K_alpha` for `0 < a < 1`.
pub fn k_alpha(alpha: f64, c: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("k_alpha needs 0 < alpha < 1, got {alpha}"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("k_alpha needs C > 0, got {c}"));
    }
    let b = 1.0 + alpha;
    Ok((b / c).powf(1.0 / b) * b / alpha * gamma(1.0 + 1.0 / b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarianceScaling {
    /// Fluctuations on scale `n^(1/2 - 1/(1+a))`, limit variance
    /// `factor * sigma2`.
    Power { factor: f64 },
    /// `alpha = 1`: fluctuations on scale `sqrt(ln n)`, limit variance `sigma2`.
    LogScaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltParams {
    /// `E[Y^(1/(1+a))] = Gamma(1 + 1/(1+a))`
    pub mu: f64,
    /// `Var[Y^(1/(1+a))]`
    pub sigma2: f64,
    pub variance_scaling: VarianceScaling,
}

pub fn clt_params(alpha: f64) -> Result<CltParams> {
    if !(alpha >= 1.0) {
        return domain(format!("the Gaussian regime needs alpha >= 1, got {alpha}"));
    }
    let b = 1.0 + alpha;
    let mu = if alpha.is_infinite() {
        1.0
    } else {
        gamma(1.0 + 1.0 / b)
    };
    let sigma2 = if alpha.is_infinite() {
        0.0
    } else {
        gamma(1.0 + 2.0 / b) - mu * mu
    };
    let variance_scaling = if alpha == 1.0 {
        VarianceScaling::LogScaled
    } else {
        VarianceScaling::Power {
            factor: (alpha + 1.0) / (alpha - 1.0),
        }
    };
    Ok(CltParams {
        mu,
        sigma2,
        variance_scaling,
    })
}

const QUAD_TOL: f64 = 1e-11;

/// `E[min of m draws] = int S(t)^m dt`.
pub fn expected_min(spec: DistributionSpec, m: u64) -> Result<f64> {
    if m == 0 {
        return domain("expected_min needs at least one draw");
    }
    let cap = spec.quadrature_cap();
    let grid = spec.hazard_grid(cap);
    let r = simpson_pieces(
        &|t| (-(m as f64) * spec.cumulative_hazard(t)).exp(),
        &grid,
        QUAD_TOL,
    )?;
    Ok(r.value)
}

/// `E[L_first + L_last] = (n-1)/(n-2) mu + (n-3)/(n-2) E[X_(1)]`, with
/// `X_(1)` the minimum of the `n - 1` edges at the start city.
pub fn expected_first_plus_last(spec: DistributionSpec, n: usize) -> Result<f64> {
    check_n(n)?;
    let (mu, _) = spec.moments();
    let nf = n as f64;
    let min = expected_min(spec, n as u64 - 1)?;
    Ok((nf - 1.0) / (nf - 2.0) * mu + (nf - 3.0) / (nf - 2.0) * min)
}

/// `sum_{i=1}^{n-2} E[W_i] = int S(t) (1 - S(t)^(n-2)) / F(t) dt`.
pub fn expected_successive_minima(spec: DistributionSpec, n: usize) -> Result<f64> {
    check_n(n)?;
    let k = (n - 2) as f64;
    let integrand = |t: f64| {
        let h = spec.cumulative_hazard(t);
        if h == 0.0 {
            return k;
        }
        let s = (-h).exp();
        s * -(-k * h).exp_m1() / -(-h).exp_m1()
    };
    let cap = spec.quadrature_cap();
    let grid = spec.hazard_grid(cap);
    let r = simpson_pieces(&integrand, &grid, QUAD_TOL)?;
    Ok(r.value)
}

/// Exact `E[T_n]` by quadrature.
pub fn expected_tnn_integral(spec: DistributionSpec, n: usize) -> Result<f64> {
    Ok(expected_successive_minima(spec, n)? + expected_first_plus_last(spec, n)?)
}

/// `E[T_n]` for unit exponential weights:
/// `H_{n-1} + (n-1)/(n-2) - 1/((n-1)(n-2))`.
pub fn expected_tnn_exponential(n: usize) -> Result<f64> {
    check_n(n)?;
    // Neumaier-compensated harmonic sum, smallest terms first
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut add = |x: f64| {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    };
    for i in (1..n).rev() {
        add(1.0 / i as f64);
    }
    let nf = n as f64;
    add(-1.0 / ((nf - 1.0) * (nf - 2.0)));
    add(1.0);
    add(1.0 / (nf - 2.0));
    Ok(sum + comp)
}

/// `lim_n E[T_n] = int S(t) / F(t) dt + mu` for `-1 < alpha < 0`.
pub fn expected_tnn_limit(spec: DistributionSpec) -> Result<f64> {
    let ab = spec.alpha_of();
    if !(ab.alpha < 0.0) {
        return Err(Error::Unsupported(format!(
            "E[T_n] diverges unless alpha < 0 (got alpha = {})",
            ab.alpha
        )));
    }
    let cap = spec.quadrature_cap();
    let grid = spec.hazard_grid(cap);
    let x1 = grid[1];
    // on [0, x1], F(t) ~ C t^(1+a) / (1+a)
    let b = 1.0 + ab.alpha;
    let head = b / ab.c * x1.powf(-ab.alpha) / -ab.alpha;
    let integrand = |t: f64| {
        let h = spec.cumulative_hazard(t);
        (-h).exp() / -(-h).exp_m1()
    };
    let body = simpson_pieces(&integrand, &grid[1..], QUAD_TOL)?;
    Ok(head + body.value + spec.moments().0)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return domain(format!("a tour needs at least 3 cities, got n = {n}"));
    }
    Ok(())
}

// g(y) = (1 + y/2) e^{-y}, strictly decreasing from 1 to 0.
fn g(y: f64) -> f64 {
    (1.0 + 0.5 * y) * (-y).exp()
}

fn g_prime(y: f64) -> f64 {
    -0.5 * (1.0 + y) * (-y).exp()
}

// 1 - g(y) without cancellation near 0.
fn q(y: f64) -> f64 {
    -(-y).exp_m1() - 0.5 * y * (-y).exp()
}

/// The point where `h(x*) = x*`, i.e. `g(x*) = 1/2`.
pub fn wastlund_fixed_point() -> f64 {
    static FIXED: OnceLock<f64> = OnceLock::new();
    *FIXED.get_or_init(|| {
        find_root(|y| (g(y) - 0.5, g_prime(y)), 0.0, 4.0, 1e-16).expect("bracketed")
    })
}

/// The involution `h` defined by `g(x) + g(h(x)) = 1`.
pub fn wastlund_h(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("wastlund_h needs x > 0, got {x}"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let star = wastlund_fixed_point();
    if x >= star {
        // small h: solve 1 - g(h) = g(x)
        let target = g(x);
        find_root(|h| (q(h) - target, -g_prime(h)), 0.0, star, 1e-16)
    } else {
        let target = q(x);
        let mut hi = 2.0 * star;
        while g(hi) > target {
            hi *= 2.0;
        }
        find_root(|h| (g(h) - target, g_prime(h)), star, hi, 1e-13)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WastlundConstant {
    pub value: f64,
    /// Quadrature error estimate plus the certified tail bound.
    pub error_estimate: f64,
    pub fixed_point: f64,
    pub upper_limit: f64,
}

const WASTLUND_UPPER: f64 = 40.0;

fn h_or_nan(x: f64) -> f64 {
    wastlund_h(x).unwrap_or(f64::NAN)
}

/// `(1/2) int_0^inf h(x) dx`. The singular part over `(0, x*)` is folded
/// onto `(x*, inf)` through the involution, giving
/// `x*^2 / 2 + int_{x*}^inf h(x) dx`.
pub fn wastlund_constant() -> Result<WastlundConstant> {
    wastlund_constant_with_tol(1e-11)
}

pub fn wastlund_constant_with_tol(abs_tol: f64) -> Result<WastlundConstant> {
    let star = wastlund_fixed_point();
    let body = simpson_abs(&h_or_nan, star, WASTLUND_UPPER, abs_tol)?;
    // h <= 2.5 g(x) once h <= 1, and int_X^inf g = (3/2 + X/2) e^{-X}
    let tail = 2.5 * (1.5 + 0.5 * WASTLUND_UPPER) * (-WASTLUND_UPPER).exp();
    Ok(WastlundConstant {
        value: 0.5 * star * star + body.value,
        error_estimate: body.error + tail,
        fixed_point: star,
        upper_limit: WASTLUND_UPPER,
    })
}

/// The same constant without folding: `(1/2)(int_0^{x*} h + int_{x*}^inf h)`,
/// the first piece through `x = x* e^{-s}`.
pub fn wastlund_constant_unfolded(abs_tol: f64) -> Result<f64> {
    let star = wastlund_fixed_point();
    let near_zero = simpson_abs(
        &|s: f64| {
            let x = star * (-s).exp();
            h_or_nan(x) * x
        },
        0.0,
        80.0,
        abs_tol,
    )?;
    let far = simpson_abs(&h_or_nan, star, WASTLUND_UPPER, abs_tol)?;
    Ok(0.5 * (near_zero.value + far.value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `alpha = 0`: `T / ln n -> 1 / f(0)`.
    LogRegime,
    /// `0 < alpha < 1`: `T / n^(a/(1+a)) -> K_alpha`.
    PowerRegime,
    /// `-1 < alpha < 0`: `E[T]` converges.
    ConvergentRegime,
    /// Weibull with `alpha >= 1`: Gaussian fluctuations.
    GaussianRegime,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthScale {
    #[serde(rename = "log n")]
    Log,
    #[serde(rename = "n^e")]
    Power,
    #[serde(rename = "const")]
    Constant,
    #[serde(rename = "gauss")]
    Gauss,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub regime: Regime,
    pub alpha: f64,
    pub c: f64,
    /// `1/f(0)`, `K_alpha`, the limit of `E[T]`, or the limit variance of the
    /// scaled fluctuations, by regime.
    pub constant: f64,
    pub scale: GrowthScale,
    /// Exponent `e` for `n^e` scales (growth of the mean in the power regime,
    /// of the fluctuations in the Gaussian regime when `alpha > 1`).
    pub exponent: Option<f64>,
    /// The n the scale was evaluated at.
    pub n: usize,
    pub scale_at_n: f64,
    /// `constant * scale(n)` where the regime predicts the mean.
    pub leading_order: Option<f64>,
}

impl AsymptoticPrediction {
    /// Leading-order `E[T_n]` where the regime predicts one.
    pub fn mean_at(&self, n: f64) -> Option<f64> {
        match self.regime {
            Regime::LogRegime => Some(self.constant * n.ln()),
            Regime::PowerRegime => Some(self.constant * n.powf(self.exponent?)),
            Regime::ConvergentRegime => Some(self.constant),
            Regime::GaussianRegime => None,
        }
    }

    /// Growth of the mean (`ln n`, `n^e`, 1) or of the fluctuations
    /// (`n^e`, `sqrt(ln n)`).
    pub fn scale_at(&self, n: f64) -> f64 {
        match (self.scale, self.exponent) {
            (GrowthScale::Log, _) => n.ln(),
            (GrowthScale::Power, Some(e)) | (GrowthScale::Gauss, Some(e)) => n.powf(e),
            (GrowthScale::Gauss, None) => n.ln().sqrt(),
            _ => 1.0,
        }
    }
}

/// Regime dispatch on the density behavior at zero, with the growth scale
/// evaluated at `n`.
pub fn predict(spec: DistributionSpec, n: usize) -> Result<AsymptoticPrediction> {
    let mut p = dispatch(spec)?;
    p.n = n;
    p.scale_at_n = p.scale_at(n as f64);
    p.leading_order = p.mean_at(n as f64);
    Ok(p)
}

fn dispatch(spec: DistributionSpec) -> Result<AsymptoticPrediction> {
    let ab = spec.alpha_of();
    let (alpha, c) = (ab.alpha, ab.c);
    if alpha == 0.0 {
        return Ok(AsymptoticPrediction {
            regime: Regime::LogRegime,
            alpha,
            c,
            constant: 1.0 / c,
            scale: GrowthScale::Log,
            exponent: None,
            n: 0,
            scale_at_n: f64::NAN,
            leading_order: None,
        });
    }
    if alpha > 0.0 && alpha < 1.0 {
        return Ok(AsymptoticPrediction {
            regime: Regime::PowerRegime,
            alpha,
            c,
            constant: k_alpha(alpha, c)?,
            scale: GrowthScale::Power,
            exponent: Some(alpha / (1.0 + alpha)),
            n: 0,
            scale_at_n: f64::NAN,
            leading_order: None,
        });
    }
    if alpha < 0.0 {
        return Ok(AsymptoticPrediction {
            regime: Regime::ConvergentRegime,
            alpha,
            c,
            constant: expected_tnn_limit(spec)?,
            scale: GrowthScale::Constant,
            exponent: None,
            n: 0,
            scale_at_n: f64::NAN,
            leading_order: None,
        });
    }
    let DistributionSpec::Weibull { scale, .. } = spec else {
        return Err(Error::Unsupported(format!(
            "no limit law is known for alpha >= 1 outside the Weibull family (got {spec})"
        )));
    };
    let p = clt_params(alpha)?;
    let (constant, exponent) = match p.variance_scaling {
        VarianceScaling::Power { factor } => (factor * p.sigma2, Some(0.5 - 1.0 / (1.0 + alpha))),
        VarianceScaling::LogScaled => (p.sigma2, None),
    };
    Ok(AsymptoticPrediction {
        regime: Regime::GaussianRegime,
        alpha,
        c,
        constant: constant * scale * scale,
        scale: GrowthScale::Gauss,
        exponent,
        n: 0,
        scale_at_n: f64::NAN,
        leading_order: None,
    })
}
