//! Summaries and goodness-of-fit machinery used to check the limit theorems
//! at finite n.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{clt_params, VarianceScaling};
use crate::distributions::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::harness::streaming::simulate_streaming;
use crate::parallel::replicate;
use crate::rng::split_seed;
use crate::special::normal_cdf;

/// Asymptotic 99% critical value of `sqrt(m) D`.
pub const KS_CRITICAL_99: f64 = 1.628;
pub const KS_MIN_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub replications: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<Vec<f64>>,
}

impl McSummary {
    /// Folds `samples` in index order.
    pub fn from_samples(samples: &[f64], retain: bool) -> Self {
        let m = samples.len();
        let mean = if m == 0 {
            f64::NAN
        } else {
            samples.iter().sum::<f64>() / m as f64
        };
        let variance = if m < 2 {
            0.0
        } else {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64
        };
        let samples = retain.then(|| sorted(samples));
        Self {
            replications: m,
            mean,
            variance,
            std_error: (variance / m.max(1) as f64).sqrt(),
            samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub n_effective: f64,
    pub threshold_99: f64,
    pub pass: bool,
}

impl KsReport {
    fn new(statistic: f64, n_effective: f64) -> Self {
        let threshold_99 = KS_CRITICAL_99 / n_effective.sqrt();
        Self {
            statistic,
            n_effective,
            threshold_99,
            pass: statistic < threshold_99,
        }
    }
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// `sup_x |F_m(x) - F(x)|`.
pub fn ks_statistic_one<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let xs = sorted(samples);
    let m = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let fx = cdf(x);
        let above = (i + 1) as f64 / m - fx;
        let below = fx - i as f64 / m;
        d.max(above).max(below)
    })
}

/// `sup_x |F_a(x) - F_b(x)|`, ties handled by advancing past equal values.
pub fn ks_statistic_two(a: &[f64], b: &[f64]) -> f64 {
    let xs = sorted(a);
    let ys = sorted(b);
    let (m, k) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / k).abs());
    }
    d
}

pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsReport> {
    check_len(samples.len())?;
    Ok(KsReport::new(
        ks_statistic_one(samples, cdf),
        samples.len() as f64,
    ))
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    check_len(a.len())?;
    check_len(b.len())?;
    let (m, k) = (a.len() as f64, b.len() as f64);
    Ok(KsReport::new(ks_statistic_two(a, b), m * k / (m + k)))
}

fn check_len(m: usize) -> Result<()> {
    if m == 0 {
        return domain("KS test on an empty sample");
    }
    if m < KS_MIN_SAMPLES {
        return domain(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {m}"
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ScalingModel {
    /// `y = a ln n + b`
    Log,
    /// `y = a n^p + b`, `p` fixed
    Power { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: ScalingModel,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least squares on the transformed abscissa (`ln n` or `n^p`).
pub fn fit_scaling(xs: &[f64], ys: &[f64], model: ScalingModel) -> Result<ScalingFit> {
    if xs.len() != ys.len() {
        return domain("fit_scaling: xs and ys differ in length");
    }
    let mut distinct = sorted(xs);
    distinct.dedup();
    if distinct.len() < 4 {
        return domain(format!(
            "fit_scaling needs at least 4 distinct n values, got {}",
            distinct.len()
        ));
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return domain("fit_scaling: n values must be positive");
    }
    let t: Vec<f64> = xs
        .iter()
        .map(|&x| match model {
            ScalingModel::Log => x.ln(),
            ScalingModel::Power { p } => x.powf(p),
        })
        .collect();
    let m = t.len() as f64;
    let tm = t.iter().sum::<f64>() / m;
    let ym = ys.iter().sum::<f64>() / m;
    let stt: f64 = t.iter().map(|v| (v - tm) * (v - tm)).sum();
    let sty: f64 = t.iter().zip(ys).map(|(v, y)| (v - tm) * (y - ym)).sum();
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let ss_tot: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    let ss_res: f64 = t
        .iter()
        .zip(ys)
        .map(|(v, y)| {
            let r = y - (slope * v + intercept);
            r * r
        })
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(ScalingFit {
        model,
        slope,
        intercept,
        r2,
    })
}

/// Sample correlation coefficient.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len() as f64;
    let ma = a.iter().sum::<f64>() / m;
    let mb = b.iter().sum::<f64>() / m;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltCheck {
    pub alpha: f64,
    pub n: usize,
    /// `n^(1/2 - 1/(1+alpha))` or `sqrt(ln n)`.
    pub rate: f64,
    /// Limit variance of `(T - E T) / rate`.
    pub limit_variance: f64,
    pub empirical_mean: f64,
    /// Variance of `(T - mean) / rate`.
    pub empirical_scaled_variance: f64,
    pub ks: KsReport,
}

/// Standardized totals `(T - mean(T)) / (rate * sd_limit)` for a Weibull law
/// with shape `1 + alpha >= 2`, simulated in streaming mode.
pub fn clt_standardized(
    spec: DistributionSpec,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<(Vec<f64>, CltCheck)> {
    let DistributionSpec::Weibull { scale, .. } = spec else {
        return Err(Error::Unsupported(format!(
            "the Gaussian limit is only known for Weibull weights, got {spec}"
        )));
    };
    let alpha = spec.alpha_of().alpha;
    let params = clt_params(alpha)?;
    // the limit is stated for unit scale; the total scales linearly
    let (rate, factor) = match params.variance_scaling {
        VarianceScaling::Power { factor } => ((n as f64).powf(0.5 - 1.0 / (1.0 + alpha)), factor),
        VarianceScaling::LogScaled => ((n as f64).ln().sqrt(), 1.0),
    };
    let rate = rate * scale;
    let limit_variance = factor * params.sigma2;
    let totals = replicate(replications, |r| {
        simulate_streaming(spec, n, 0, split_seed(seed, r as u64)).map(|t| t.total)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let summary = McSummary::from_samples(&totals, false);
    let sd = limit_variance.sqrt();
    let z: Vec<f64> = totals
        .iter()
        .map(|t| (t - summary.mean) / (rate * sd))
        .collect();
    let ks = ks_one_sample(&z, normal_cdf)?;
    Ok((
        z,
        CltCheck {
            alpha,
            n,
            rate,
            limit_variance,
            empirical_mean: summary.mean,
            empirical_scaled_variance: summary.variance / (rate * rate),
            ks,
        },
    ))
}

/// KS test of standardized streaming totals against the standard normal.
pub fn clt_check(
    spec: DistributionSpec,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<CltCheck> {
    clt_standardized(spec, n, replications, seed).map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    #[test]
    fn summary_basics() {
        let s = McSummary::from_samples(&[3.0, 1.0, 2.0, 6.0], true);
        assert_eq!(s.replications, 4);
        assert_relative_eq!(s.mean, 3.0);
        assert_relative_eq!(s.variance, 14.0 / 3.0);
        assert_relative_eq!(s.std_error, (14.0f64 / 3.0 / 4.0).sqrt());
        assert_eq!(s.samples.unwrap(), vec![1.0, 2.0, 3.0, 6.0]);
        assert!(McSummary::from_samples(&[1.0], false).samples.is_none());
    }

    #[test]
    fn calibrated_sample_has_half_step_statistic() {
        let m = 1000;
        let xs: Vec<f64> = (1..=m).map(|i| (i as f64 - 0.5) / m as f64).collect();
        let r = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert_relative_eq!(r.statistic, 0.5 / m as f64, epsilon = 1e-12);
        assert!(r.pass);
        assert_relative_eq!(r.threshold_99, 1.628 / (m as f64).sqrt());
    }

    #[test]
    fn gross_mismatch_fails() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let mut rng = RngStream::new(3);
        let xs: Vec<f64> = (0..10_000).map(|_| spec.sample(&mut rng)).collect();
        let r = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(!r.pass);
        // sup |(1 - e^-x) - x| on [0, 1] is e^-1 at x = 1
        assert!(
            (r.statistic - (-1.0f64).exp()).abs() < 0.02,
            "{}",
            r.statistic
        );
    }

    #[test]
    fn identical_arrays_zero_distance() {
        let xs: Vec<f64> = (0..200).map(|i| (i as f64).sin()).collect();
        let r = ks_two_sample(&xs, &xs).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn two_sample_small_cases() {
        assert_relative_eq!(
            ks_statistic_two(&[1.0, 1.0, 4.0, 4.0], &[1.0, 1.0, 1.0, 4.0]),
            0.25
        );
        let xs = [0.42, 0.24, 0.86, 0.85, 0.82, 0.82, 0.25, 0.78, 0.13, 0.27];
        let ys = [0.24, 0.27, 0.87, 0.29, 0.57, 0.44, 0.5, 0.00, 0.56, 0.03];
        assert_relative_eq!(ks_statistic_two(&xs, &ys), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn empty_and_short_inputs_rejected() {
        assert!(ks_one_sample(&[], |x| x).is_err());
        assert!(ks_two_sample(&[1.0; 150], &[]).is_err());
        assert!(ks_one_sample(&[0.5; 50], |x| x).is_err());
    }

    #[test]
    fn noiseless_fits() {
        let xs: Vec<f64> = (7..=13).map(|k| (1u64 << k) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x.ln() + 5.0).collect();
        let f = fit_scaling(&xs, &ys, ScalingModel::Log).unwrap();
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(f.intercept, 5.0, epsilon = 1e-10);
        assert_relative_eq!(f.r2, 1.0, epsilon = 1e-12);
        let ys: Vec<f64> = xs.iter().map(|x| 2.7 * x.powf(1.0 / 3.0) - 1.3).collect();
        let f = fit_scaling(&xs, &ys, ScalingModel::Power { p: 1.0 / 3.0 }).unwrap();
        assert_relative_eq!(f.slope, 2.7, epsilon = 1e-12);
        assert_relative_eq!(f.r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fit_needs_four_points() {
        let xs = [1.0, 2.0, 3.0, 3.0];
        assert!(fit_scaling(&xs, &[1.0; 4], ScalingModel::Log).is_err());
        assert!(fit_scaling(&[1.0, 2.0], &[1.0, 2.0, 3.0], ScalingModel::Log).is_err());
    }

    #[test]
    fn clt_rejects_non_weibull() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert!(matches!(
            clt_check(e, 100, 100, 0),
            Err(Error::Unsupported(_))
        ));
        let w = DistributionSpec::weibull(1.5, 1.0).unwrap();
        assert!(clt_check(w, 100, 100, 0).is_err());
    }
}
