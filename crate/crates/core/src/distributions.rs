//! Edge-weight laws on the positive half-line.
//!
//! All four families are sampled by inversion. Internally the inverse is
//! parametrized by the cumulative hazard `H(x) = -ln(1 - F(x))`, which keeps
//! full relative precision both near `u = 0` (short edges, the regime that
//! drives every limit theorem) and near `u = 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::numeric;
use crate::rng::RngStream;
use crate::special::gamma;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistributionSpec {
    Exponential {
        mean: f64,
    },
    Uniform {
        high: f64,
    },
    Weibull {
        shape: f64,
        scale: f64,
    },
    /// `F(x) = (x / cutoff)^(1 + alpha)` on `[0, cutoff]`. The constant at zero
    /// is `C = (1 + alpha) / cutoff^(1 + alpha)`.
    PowerLaw {
        alpha: f64,
        cutoff: f64,
    },
}

/// Behavior of the density at zero: `f(t) / t^alpha -> c` as `t -> 0+`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaBehavior {
    pub alpha: f64,
    pub c: f64,
}

impl AlphaBehavior {
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return domain(format!("alpha must exceed -1, got {alpha}"));
        }
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("constant at zero must be positive, got {c}"));
        }
        Ok(Self { alpha, c })
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{name} must be positive and finite, got {v}"))
    }
}

impl DistributionSpec {
    pub fn exponential(mean: f64) -> Result<Self> {
        Ok(Self::Exponential {
            mean: positive("mean", mean)?,
        })
    }

    pub fn uniform(high: f64) -> Result<Self> {
        Ok(Self::Uniform {
            high: positive("high", high)?,
        })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self::Weibull {
            shape: positive("shape", shape)?,
            scale: positive("scale", scale)?,
        })
    }

    pub fn power_law(alpha: f64, cutoff: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite()) {
            return domain(format!("power-law exponent must exceed -1, got {alpha}"));
        }
        Ok(Self::PowerLaw {
            alpha,
            cutoff: positive("cutoff", cutoff)?,
        })
    }

    /// Unit-scale Weibull with shape `1 + alpha`, whose density behaves like
    /// `(1 + alpha) t^alpha` at zero.
    pub fn weibull_alpha(alpha: f64) -> Result<Self> {
        Self::weibull(1.0 + alpha, 1.0)
    }

    /// A fixed set of laws covering every family and regime.
    pub fn builtins() -> Vec<Self> {
        vec![
            Self::Exponential { mean: 1.0 },
            Self::Exponential { mean: 2.5 },
            Self::Uniform { high: 1.0 },
            Self::Uniform { high: 3.0 },
            Self::Weibull {
                shape: 0.5,
                scale: 1.0,
            },
            Self::Weibull {
                shape: 1.5,
                scale: 1.0,
            },
            Self::Weibull {
                shape: 2.0,
                scale: 1.0,
            },
            Self::Weibull {
                shape: 3.0,
                scale: 2.0,
            },
            Self::PowerLaw {
                alpha: 0.5,
                cutoff: 1.0,
            },
            Self::PowerLaw {
                alpha: -0.5,
                cutoff: 2.0,
            },
        ]
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Uniform { .. } => "uniform",
            Self::Weibull { .. } => "weibull",
            Self::PowerLaw { .. } => "powerlaw",
        }
    }

    pub fn is_weibull(&self) -> bool {
        matches!(self, Self::Weibull { .. })
    }

    /// Right end of the support (`inf` for unbounded laws).
    pub fn support_max(&self) -> f64 {
        match *self {
            Self::Uniform { high } => high,
            Self::PowerLaw { cutoff, .. } => cutoff,
            _ => f64::INFINITY,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            Self::Exponential { mean } => -(-x / mean).exp_m1(),
            Self::Uniform { high } => (x / high).min(1.0),
            Self::Weibull { shape, scale } => -(-(x / scale).powf(shape)).exp_m1(),
            Self::PowerLaw { alpha, cutoff } => (x / cutoff).min(1.0).powf(1.0 + alpha),
        }
    }

    /// `1 - F(x)` without cancellation.
    pub fn survival(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        match *self {
            Self::Exponential { mean } => (-x / mean).exp(),
            Self::Weibull { shape, scale } => (-(x / scale).powf(shape)).exp(),
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Cumulative hazard `-ln(1 - F(x))`; infinite at the right end of a
    /// compact support.
    pub fn cumulative_hazard(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            Self::Exponential { mean } => x / mean,
            Self::Weibull { shape, scale } => (x / scale).powf(shape),
            Self::Uniform { high } => {
                if x >= high {
                    f64::INFINITY
                } else {
                    -(-x / high).ln_1p()
                }
            }
            Self::PowerLaw { alpha, cutoff } => {
                if x >= cutoff {
                    f64::INFINITY
                } else {
                    -(-(x / cutoff).powf(1.0 + alpha)).ln_1p()
                }
            }
        }
    }

    /// Smallest `x` with `H(x) >= t`, i.e. `F^{-1}(1 - e^{-t})`.
    #[inline]
    pub fn quantile_hazard(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { mean } => mean * t,
            Self::Weibull { shape, scale } => scale * t.powf(1.0 / shape),
            Self::Uniform { high } => high * -(-t).exp_m1(),
            Self::PowerLaw { alpha, cutoff } => cutoff * (-(-t).exp_m1()).powf(1.0 / (1.0 + alpha)),
        }
    }

    /// Generalized inverse `inf { x : F(x) >= u }` for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return domain(format!("quantile level must lie in [0, 1), got {u}"));
        }
        Ok(self.quantile_hazard(-(-u).ln_1p()))
    }

    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { mean } => (-x / mean).exp() / mean,
            Self::Uniform { high } => {
                if x <= high {
                    1.0 / high
                } else {
                    0.0
                }
            }
            Self::Weibull { shape, scale } => {
                let z = x / scale;
                if z == 0.0 {
                    return match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => f64::INFINITY,
                        Some(std::cmp::Ordering::Equal) => 1.0 / scale,
                        _ => 0.0,
                    };
                }
                shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Self::PowerLaw { alpha, cutoff } => {
                if x > cutoff {
                    return 0.0;
                }
                if x == 0.0 {
                    return if alpha < 0.0 {
                        f64::INFINITY
                    } else if alpha == 0.0 {
                        1.0 / cutoff
                    } else {
                        0.0
                    };
                }
                (1.0 + alpha) / cutoff * (x / cutoff).powf(alpha)
            }
        }
    }

    pub fn alpha_of(&self) -> AlphaBehavior {
        let (alpha, c) = match *self {
            Self::Exponential { mean } => (0.0, 1.0 / mean),
            Self::Uniform { high } => (0.0, 1.0 / high),
            Self::Weibull { shape, scale } => (shape - 1.0, shape / scale.powf(shape)),
            Self::PowerLaw { alpha, cutoff } => (alpha, (1.0 + alpha) / cutoff.powf(1.0 + alpha)),
        };
        AlphaBehavior { alpha, c }
    }

    /// Closed-form `(mean, variance)`.
    pub fn moments(&self) -> (f64, f64) {
        match *self {
            Self::Exponential { mean } => (mean, mean * mean),
            Self::Uniform { high } => (0.5 * high, high * high / 12.0),
            Self::Weibull { shape, scale } => {
                let g1 = gamma(1.0 + 1.0 / shape);
                let g2 = gamma(1.0 + 2.0 / shape);
                (scale * g1, scale * scale * (g2 - g1 * g1))
            }
            Self::PowerLaw { alpha, cutoff } => {
                let b = 1.0 + alpha;
                let m1 = b / (b + 1.0) * cutoff;
                let m2 = b / (b + 2.0) * cutoff * cutoff;
                (m1, m2 - m1 * m1)
            }
        }
    }

    /// Point beyond which the remaining mass is below `1e-12` (or the end of
    /// a compact support).
    pub fn quadrature_cap(&self) -> f64 {
        let max = self.support_max();
        if max.is_finite() {
            max
        } else {
            self.quantile_hazard(-(1e-12f64).ln())
        }
    }

    /// `(mean, variance)` by adaptive Simpson on `int S(t) dt` and
    /// `int 2 t S(t) dt`, relative tolerance `1e-9`.
    pub fn moments_by_quadrature(&self) -> Result<(f64, f64)> {
        let cap = self.quadrature_cap();
        let grid = self.hazard_grid(cap);
        let m1 = numeric::simpson_pieces(&|t| self.survival(t), &grid, 1e-11 * cap.max(1.0))?;
        let m2 = numeric::simpson_pieces(
            &|t| 2.0 * t * self.survival(t),
            &grid,
            1e-11 * cap.max(1.0) * cap.max(1.0),
        )?;
        Ok((m1.value, m2.value - m1.value * m1.value))
    }

    /// Breakpoints `0 < x_k <= cap` at cumulative hazards `2^-k` and `k`, so
    /// quadrature pieces follow the scale of the law.
    pub(crate) fn hazard_grid(&self, cap: f64) -> Vec<f64> {
        let mut pts = vec![0.0];
        for k in (0..=40).rev() {
            let x = self.quantile_hazard((0.5f64).powi(k));
            if x > *pts.last().unwrap() && x < cap {
                pts.push(x);
            }
        }
        for t in 2..=40 {
            let x = self.quantile_hazard(t as f64);
            if x > *pts.last().unwrap() && x < cap {
                pts.push(x);
            }
        }
        pts.push(cap);
        pts
    }

    /// Inverse-transform draw: one uniform, one weight.
    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile_hazard(rng.exp1())
    }

    #[inline]
    pub fn sample_from_uniform(&self, u: f64) -> f64 {
        self.quantile_hazard(-(-u).ln_1p())
    }

    /// `W_i = F^{-1}(1 - exp(-Y / i))` with `Y` standard exponential; equal in
    /// law to the minimum of `i` independent draws.
    #[inline]
    pub fn sample_w(&self, i: u64, rng: &mut RngStream) -> f64 {
        debug_assert!(i >= 1);
        let y = rng.exp1();
        self.quantile_hazard(y / i as f64)
    }

    /// `P(W_i <= w) = 1 - (1 - F(w))^i`.
    pub fn min_cdf(&self, i: u64, w: f64) -> f64 {
        -(-(i as f64) * self.cumulative_hazard(w)).exp_m1()
    }

    /// `sum_{i=1}^{n-2} W_i` from `n - 2` independent exponential draws.
    pub fn surrogate_sum(&self, n: usize, rng: &mut RngStream) -> Result<f64> {
        if n < 3 {
            return domain(format!("surrogate sum needs n >= 3, got {n}"));
        }
        Ok(self.surrogate_sum_unchecked(n, rng))
    }

    #[inline]
    pub(crate) fn surrogate_sum_unchecked(&self, n: usize, rng: &mut RngStream) -> f64 {
        let mut sum = 0.0;
        for i in 1..=(n as u64 - 2) {
            sum += self.sample_w(i, rng);
        }
        sum
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Exponential { mean } => write!(f, "kind=exponential mean={mean}"),
            Self::Uniform { high } => write!(f, "kind=uniform high={high}"),
            Self::Weibull { shape, scale } => write!(f, "kind=weibull shape={shape} scale={scale}"),
            Self::PowerLaw { alpha, cutoff } => {
                write!(f, "kind=powerlaw alpha={alpha} cutoff={cutoff}")
            }
        }
    }
}

/// Parses the flat key-value form, e.g. `kind=weibull shape=1.5 scale=1.0`.
/// A bare kind (`exponential`) takes unit defaults.
impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kind: Option<String> = None;
        let mut params: Vec<(String, f64)> = Vec::new();
        for tok in s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            match tok.split_once('=') {
                None if kind.is_none() => kind = Some(tok.to_ascii_lowercase()),
                None => {
                    return Err(Error::Parse(format!(
                        "unexpected token `{tok}` in spec `{s}`"
                    )))
                }
                Some((k, v)) if k.eq_ignore_ascii_case("kind") => {
                    kind = Some(v.to_ascii_lowercase())
                }
                Some((k, v)) => {
                    let value: f64 = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad number `{v}` for `{k}`")))?;
                    params.push((k.to_ascii_lowercase(), value));
                }
            }
        }
        let kind = kind.ok_or_else(|| Error::Parse(format!("missing kind in spec `{s}`")))?;
        let allowed: &[&str] = match kind.as_str() {
            "exponential" | "exp" => &["mean"],
            "uniform" => &["high"],
            "weibull" => &["shape", "scale"],
            "powerlaw" | "power" => &["alpha", "exponent", "cutoff"],
            other => return Err(Error::Parse(format!("unknown distribution kind `{other}`"))),
        };
        for (k, _) in &params {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Parse(format!(
                    "unknown parameter `{k}` for kind `{kind}`"
                )));
            }
        }
        let get = |name: &str, default: f64| {
            params
                .iter()
                .rev()
                .find(|(k, _)| k == name)
                .map(|(_, v)| *v)
                .unwrap_or(default)
        };
        match kind.as_str() {
            "exponential" | "exp" => Self::exponential(get("mean", 1.0)),
            "uniform" => Self::uniform(get("high", 1.0)),
            "weibull" => Self::weibull(get("shape", 1.0), get("scale", 1.0)),
            _ => {
                let alpha = params
                    .iter()
                    .rev()
                    .find(|(k, _)| k == "alpha" || k == "exponent")
                    .map(|(_, v)| *v)
                    .unwrap_or(0.0);
                Self::power_law(alpha, get("cutoff", 1.0))
            }
        }
    }
}

impl Serialize for DistributionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DistributionSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn builtins() -> Vec<DistributionSpec> {
        DistributionSpec::builtins()
    }

    #[test]
    fn cdf_examples() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert_eq!(e.cdf(0.0), 0.0);
        assert_eq!(e.cdf(-3.0), 0.0);
        let w = DistributionSpec::weibull(2.0, 1.0).unwrap();
        assert_relative_eq!(w.cdf(1.0), 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(w.cdf(1.0), 0.632_120_6, epsilon = 1e-7);
        let u = DistributionSpec::uniform(1.0).unwrap();
        assert_eq!(u.cdf(0.25), 0.25);
        assert_eq!(u.cdf(7.0), 1.0);
    }

    #[test]
    fn quantile_examples() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert_relative_eq!(
            e.quantile(1.0 - (-1.0f64).exp()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let w = DistributionSpec::weibull(1.5, 1.0).unwrap();
        assert_relative_eq!(
            w.quantile(0.5).unwrap(),
            2f64.ln().powf(2.0 / 3.0),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            w.quantile(0.5).unwrap(),
            0.783_219_768_774_651_3,
            epsilon = 1e-14
        );
        let p = DistributionSpec::power_law(0.5, 1.0).unwrap();
        assert_relative_eq!(p.quantile(0.125).unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn quantile_domain_errors() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert!(e.quantile(1.0).is_err());
        assert!(e.quantile(-0.1).is_err());
        assert!(e.quantile(f64::NAN).is_err());
        assert_eq!(e.quantile(0.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_is_generalized_inverse() {
        for spec in builtins() {
            for k in 1..100 {
                let u = k as f64 / 100.0;
                let x = spec.quantile(u).unwrap();
                assert_relative_eq!(spec.cdf(x), u, epsilon = 1e-10);
                // F(x') < u just below the quantile
                assert!(spec.cdf(x * (1.0 - 1e-9)) < u, "{spec} at u={u}");
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let a = DistributionSpec::exponential(1.0).unwrap().alpha_of();
        assert_eq!((a.alpha, a.c), (0.0, 1.0));
        for alpha in [-0.5, 0.5, 1.0, 2.0] {
            let a = DistributionSpec::weibull_alpha(alpha).unwrap().alpha_of();
            assert_relative_eq!(a.alpha, alpha, epsilon = 1e-15);
            assert_relative_eq!(a.c, 1.0 + alpha, epsilon = 1e-15);
        }
        let a = DistributionSpec::uniform(1.0).unwrap().alpha_of();
        assert_eq!((a.alpha, a.c), (0.0, 1.0));
        assert!(AlphaBehavior::new(-1.0, 1.0).is_err());
        assert!(AlphaBehavior::new(0.5, 0.0).is_err());
    }

    #[test]
    fn density_ratio_at_zero() {
        // Weibull shape 1/2 is excluded here: e^{-t^{1/2}} drifts 3% by t = 1e-3.
        let specs = [
            DistributionSpec::exponential(1.0).unwrap(),
            DistributionSpec::uniform(1.0).unwrap(),
            DistributionSpec::weibull(1.5, 1.0).unwrap(),
            DistributionSpec::weibull(3.0, 2.0).unwrap(),
            DistributionSpec::power_law(0.5, 1.0).unwrap(),
            DistributionSpec::power_law(-0.5, 2.0).unwrap(),
        ];
        for spec in specs {
            let AlphaBehavior { alpha, c } = spec.alpha_of();
            for t in [1e-3, 1e-4, 1e-5] {
                let ratio = spec.density(t) / t.powf(alpha);
                assert!(
                    (ratio / c - 1.0).abs() < 0.01,
                    "{spec}: ratio {ratio} vs {c}"
                );
            }
        }
        let w = DistributionSpec::weibull(0.5, 1.0).unwrap();
        for t in [1e-5, 1e-6, 1e-7] {
            assert!((w.density(t) / t.powf(-0.5) / 0.5 - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        for spec in builtins() {
            let AlphaBehavior { alpha, .. } = spec.alpha_of();
            // t = v^p with p = 1 / (1 + alpha) removes the power behavior at zero
            let p = 1.0 / (1.0 + alpha);
            let cap = spec.quadrature_cap();
            let g = |v: f64| {
                if v == 0.0 {
                    return spec.alpha_of().c * p;
                }
                let t = v.powf(p);
                spec.density(t) * p * v.powf(p - 1.0)
            };
            let top = cap.powf(1.0 / p);
            let pieces: Vec<f64> = (0..=64).map(|k| top * k as f64 / 64.0).collect();
            let r = numeric::simpson_pieces(&g, &pieces, 1e-12).unwrap();
            let total = r.value + spec.survival(cap).max(0.0);
            assert_relative_eq!(total, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn moments_examples() {
        assert_eq!(
            DistributionSpec::exponential(1.0).unwrap().moments(),
            (1.0, 1.0)
        );
        let (m, v) = DistributionSpec::weibull(2.0, 1.0).unwrap().moments();
        assert_relative_eq!(m, 0.886_226_9, epsilon = 1e-7);
        assert_relative_eq!(v, 0.214_601_8, epsilon = 1e-7);
        assert_relative_eq!(v, 1.0 - std::f64::consts::PI / 4.0, epsilon = 1e-14);
        assert_eq!(
            DistributionSpec::uniform(1.0).unwrap().moments(),
            (0.5, 1.0 / 12.0)
        );
    }

    #[test]
    fn moments_match_quadrature() {
        for spec in builtins() {
            let (m, v) = spec.moments();
            let (qm, qv) = spec.moments_by_quadrature().unwrap();
            assert_relative_eq!(m, qm, max_relative = 1e-9);
            assert_relative_eq!(v, qv, max_relative = 1e-8);
        }
    }

    #[test]
    fn sample_at_zero_uniform_is_zero() {
        for spec in builtins() {
            assert_eq!(spec.sample_from_uniform(0.0), 0.0);
        }
    }

    #[test]
    fn exponential_sample_mean() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let mut rng = RngStream::new(11);
        let n = 1_000_000;
        let mean = (0..n).map(|_| spec.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn deterministic_streams() {
        for spec in builtins() {
            let mut a = RngStream::new(99);
            let mut b = RngStream::new(99);
            for i in 1..200 {
                assert_eq!(spec.sample(&mut a).to_bits(), spec.sample(&mut b).to_bits());
                assert_eq!(
                    spec.sample_w(i, &mut a).to_bits(),
                    spec.sample_w(i, &mut b).to_bits()
                );
            }
        }
    }

    #[test]
    fn exponential_w5_mean() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let mut rng = RngStream::new(5);
        let n = 100_000;
        let mean = (0..n).map(|_| spec.sample_w(5, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.2).abs() < 3.0 * 0.2 / (n as f64).sqrt());
    }

    #[test]
    fn min_cdf_at_one_is_cdf() {
        for spec in builtins() {
            for x in [0.01, 0.3, 0.9, 1.7] {
                assert_relative_eq!(spec.min_cdf(1, x), spec.cdf(x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn surrogate_rejects_small_n() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        assert!(spec.surrogate_sum(2, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn spec_string_round_trip() {
        for spec in builtins() {
            let s = spec.to_string();
            assert_eq!(s.parse::<DistributionSpec>().unwrap(), spec);
        }
        let w: DistributionSpec = "kind=weibull shape=1.5 scale=1.0".parse().unwrap();
        assert_eq!(w, DistributionSpec::weibull(1.5, 1.0).unwrap());
        let e: DistributionSpec = "exponential".parse().unwrap();
        assert_eq!(e, DistributionSpec::exponential(1.0).unwrap());
        assert!("kind=cauchy".parse::<DistributionSpec>().is_err());
        assert!("kind=weibull shape=-1".parse::<DistributionSpec>().is_err());
        assert!("kind=uniform mean=2".parse::<DistributionSpec>().is_err());
    }
}
