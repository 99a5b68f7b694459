//! Experiment runner: replications, checks, and the run manifest.
//!
//! Replication `r` at grid point `n` draws from the stream
//! `split_seed(split_seed(master_seed, n), r)`. Results are buffered by
//! replication index and folded sequentially, so the manifest depends on the
//! config fields echoed in it and on nothing else.

pub mod config;
pub mod streaming;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{preset, Command, ConfigEcho, Mode, RunConfig, PRESETS};
pub use streaming::simulate_streaming;

use crate::asymptotics::{
    expected_tnn_exponential, expected_tnn_integral, expected_tnn_limit, predict,
    wastlund_constant, AsymptoticPrediction, Regime,
};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::exact::{brute_force, held_karp, OptRow, BRUTE_FORCE_MAX_N, HELD_KARP_MAX_N};
use crate::instance::{Instance, MAX_DENSE_N};
use crate::nn::{nn_tour, TourResult};
use crate::parallel::{replicate, with_threads};
use crate::rng::{split_seed, RngStream};
use crate::stats::{
    clt_standardized, correlation, fit_scaling, ks_one_sample, ks_two_sample, KsReport, McSummary,
    ScalingFit, ScalingModel,
};

/// Reference value for the optimal-tour constant.
pub const WASTLUND_REFERENCE: f64 = 2.041548;
pub const WASTLUND_TOLERANCE: f64 = 5e-5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Informational checks are reported but never fail a run.
    pub enforced: bool,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ks: Option<KsReport>,
}

impl Check {
    fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pass: (value - target).abs() < tolerance,
            enforced: true,
            value,
            target,
            tolerance,
            ks: None,
        }
    }

    fn ks(name: impl Into<String>, report: KsReport) -> Self {
        Self {
            name: name.into(),
            pass: report.pass,
            enforced: true,
            value: report.statistic,
            target: 0.0,
            tolerance: report.threshold_99,
            ks: Some(report),
        }
    }

    fn flag(name: impl Into<String>, pass: bool, value: f64, target: f64) -> Self {
        Self {
            name: name.into(),
            pass,
            enforced: true,
            value,
            target,
            tolerance: 0.0,
            ks: None,
        }
    }

    fn informational(mut self) -> Self {
        self.enforced = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub n: usize,
    pub seed: u64,
    /// Named summaries (`total`, `first_plus_last`, ...).
    pub summaries: BTreeMap<String, McSummary>,
    /// Named reference values at this n.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub reference: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prediction: Option<AsymptoticPrediction>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<ScalingFit>,
    pub points: Vec<PointResult>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub values: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

impl Manifest {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub manifest: Manifest,
    /// Per-replication rows (`seed,n,start,total,first,mins_sum,last`, or
    /// `seed,n,t_opt,t_nn,ratio` for `compare-opt`).
    pub replications_csv: Option<String>,
    /// `x,y,y_err` with `x = n` and `y` the mean total.
    pub plot_csv: Option<String>,
    pub wall_seconds: f64,
}

/// Runs the configured experiment, writing `manifest.json`, `timing.json`
/// and the CSV outputs under `config.output` when it is set.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    guard(config)?;
    let started = Instant::now();
    let (manifest, replications_csv, plot_csv) = if config.threads > 0 {
        with_threads(config.threads, || execute(config))?
    } else {
        execute(config)?
    };
    let out = RunOutput {
        manifest,
        replications_csv,
        plot_csv,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &config.output {
        write_outputs(dir, config, &out)?;
    }
    Ok(out)
}

/// Resource checks that must fail before any work starts.
fn guard(config: &RunConfig) -> Result<()> {
    let largest = config.n.iter().copied().max().unwrap_or(0);
    if config.command != Command::Wastlund {
        if let Some(&small) = config.n.iter().find(|&&n| n < 3) {
            return Err(Error::Domain(format!(
                "a tour needs at least 3 cities, got n = {small}"
            )));
        }
    }
    let dense = match config.command {
        Command::Identity => true,
        Command::Simulate | Command::Scaling | Command::Expect => config.mode == Mode::Direct,
        _ => false,
    };
    if dense && largest > MAX_DENSE_N {
        return Err(Error::Resource(format!(
            "n = {largest} exceeds the dense-instance cap {MAX_DENSE_N}; use mode = streaming"
        )));
    }
    if config.command == Command::CompareOpt && largest > HELD_KARP_MAX_N {
        return Err(Error::Resource(format!(
            "exact solver is capped at n = {HELD_KARP_MAX_N}, got {largest}"
        )));
    }
    Ok(())
}

type Executed = (Manifest, Option<String>, Option<String>);

fn execute(config: &RunConfig) -> Result<Executed> {
    let mut m = Manifest {
        config: config.echo(),
        prediction: None,
        fit: None,
        points: Vec::new(),
        values: BTreeMap::new(),
        checks: Vec::new(),
        all_pass: true,
    };
    let mut rows = None;
    let mut plot = None;
    match config.command {
        Command::Wastlund => run_wastlund(&mut m)?,
        Command::Simulate => rows = Some(run_simulate(config, &mut m)?),
        Command::Scaling => {
            rows = Some(run_scaling(config, &mut m)?);
            plot = Some(plot_csv(&m.points));
        }
        Command::Clt => run_clt(config, &mut m)?,
        Command::Identity => rows = Some(run_identity(config, &mut m)?),
        Command::Expect => rows = Some(run_expect(config, &mut m)?),
        Command::CompareOpt => rows = Some(run_compare_opt(config, &mut m)?),
    }
    m.all_pass = m.checks.iter().all(|c| c.pass || !c.enforced);
    Ok((m, rows, plot))
}

fn point_seed(config: &RunConfig, n: usize) -> u64 {
    split_seed(config.master_seed, n as u64)
}

/// One tour per replication, buffered in replication order.
pub fn draw_tours(
    spec: DistributionSpec,
    n: usize,
    replications: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<TourResult>> {
    replicate(replications, |r| -> Result<TourResult> {
        let s = split_seed(seed, r as u64);
        match mode {
            Mode::Streaming => simulate_streaming(spec, n, 0, s),
            Mode::Direct => {
                let inst = Instance::generate(n, spec, s)?;
                let mut t = nn_tour(&inst, 0)?;
                t.order = Vec::new();
                Ok(t)
            }
        }
    })
    .into_iter()
    .collect()
}

fn tour_rows(out: &mut String, tours: &[TourResult], seed: u64, n: usize) {
    for (r, t) in tours.iter().enumerate() {
        out.push_str(&t.csv_row(split_seed(seed, r as u64), n, false));
        out.push('\n');
    }
}

fn totals(tours: &[TourResult]) -> Vec<f64> {
    tours.iter().map(|t| t.total).collect()
}

fn plot_csv(points: &[PointResult]) -> String {
    let mut s = String::from("x,y,y_err\n");
    for p in points {
        let t = &p.summaries["total"];
        let _ = writeln!(s, "{},{},{}", p.n, t.mean, t.std_error);
    }
    s
}

fn run_wastlund(m: &mut Manifest) -> Result<()> {
    let w = wastlund_constant()?;
    m.values.insert("constant".into(), w.value);
    m.values.insert("error_estimate".into(), w.error_estimate);
    m.values.insert("fixed_point".into(), w.fixed_point);
    m.checks.push(Check::within(
        "wastlund_constant",
        w.value,
        WASTLUND_REFERENCE,
        WASTLUND_TOLERANCE,
    ));
    Ok(())
}

fn run_simulate(config: &RunConfig, m: &mut Manifest) -> Result<String> {
    let mut csv = format!("{}\n", TourResult::CSV_HEADER);
    let (mu, var) = config.spec.moments();
    for &n in &config.n {
        let seed = point_seed(config, n);
        let tours = draw_tours(config.spec, n, config.replications, seed, config.mode)?;
        tour_rows(&mut csv, &tours, seed, n);
        let fl: Vec<f64> = tours.iter().map(|t| t.first_edge + t.last_edge).collect();
        let fl2: Vec<f64> = fl.iter().map(|x| x * x).collect();
        let mins: Vec<f64> = tours.iter().map(|t| t.mins_sum).collect();
        let mut summaries = BTreeMap::new();
        summaries.insert(
            "total".into(),
            McSummary::from_samples(&totals(&tours), config.retain_samples),
        );
        summaries.insert(
            "first_plus_last".into(),
            McSummary::from_samples(&fl, config.retain_samples),
        );
        summaries.insert(
            "first_plus_last_sq".into(),
            McSummary::from_samples(&fl2, false),
        );
        summaries.insert(
            "mins_sum".into(),
            McSummary::from_samples(&mins, config.retain_samples),
        );
        if config.first_last_checks {
            let s1 = &summaries["first_plus_last"];
            let s2 = &summaries["first_plus_last_sq"];
            m.checks.push(Check::within(
                format!("first_last_mean@{n}"),
                s1.mean,
                mu,
                3.0 * s1.std_error,
            ));
            m.checks.push(Check::within(
                format!("first_last_second_moment@{n}"),
                s2.mean,
                mu * mu + var,
                3.0 * s2.std_error,
            ));
            let spec = config.spec;
            m.checks.push(Check::ks(
                format!("first_last_ks@{n}"),
                ks_one_sample(&fl, |x| spec.cdf(x))?,
            ));
            let bound = 4.0 / (config.replications as f64).sqrt();
            m.checks.push(
                Check::within(
                    format!("mins_vs_first_last_corr@{n}"),
                    correlation(&mins, &fl),
                    0.0,
                    bound,
                )
                .informational(),
            );
        }
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference: BTreeMap::new(),
        });
    }
    Ok(csv)
}

fn run_scaling(config: &RunConfig, m: &mut Manifest) -> Result<String> {
    let mut csv = format!("{}\n", TourResult::CSV_HEADER);
    let top = config.n.iter().copied().max().unwrap_or(3);
    let prediction = predict(config.spec, top).ok();
    let mut samples = Vec::new();
    for &n in &config.n {
        let seed = point_seed(config, n);
        let tours = draw_tours(config.spec, n, config.replications, seed, config.mode)?;
        tour_rows(&mut csv, &tours, seed, n);
        let t = totals(&tours);
        let mut summaries = BTreeMap::new();
        summaries.insert(
            "total".into(),
            McSummary::from_samples(&t, config.retain_samples),
        );
        let mut reference = BTreeMap::new();
        if let Some(lead) = prediction.and_then(|p| p.mean_at(n as f64)) {
            reference.insert("leading_order".into(), lead);
        }
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference,
        });
        samples.push(t);
    }
    let xs: Vec<f64> = m.points.iter().map(|p| p.n as f64).collect();
    let means: Vec<f64> = m.points.iter().map(|p| p.summaries["total"].mean).collect();
    let ses: Vec<f64> = m
        .points
        .iter()
        .map(|p| p.summaries["total"].std_error)
        .collect();
    m.prediction = prediction;
    let Some(p) = prediction else { return Ok(csv) };
    match p.regime {
        Regime::LogRegime => {
            if xs.len() >= 4 {
                let fit = fit_scaling(&xs, &means, ScalingModel::Log)?;
                m.checks.push(Check::within(
                    "log_slope",
                    fit.slope,
                    p.constant,
                    0.1 * p.constant,
                ));
                m.checks
                    .push(Check::flag("log_r2", fit.r2 >= 0.999, fit.r2, 0.999));
                m.fit = Some(fit);
            }
        }
        Regime::PowerRegime => {
            let e = p.exponent.unwrap_or(0.0);
            if xs.len() >= 4 {
                m.fit = Some(fit_scaling(&xs, &means, ScalingModel::Power { p: e })?);
            }
            let ratios: Vec<f64> = xs.iter().zip(&means).map(|(x, y)| y / x.powf(e)).collect();
            let last = ratios.len() - 1;
            m.checks.push(Check::within(
                "power_ratio",
                ratios[last],
                p.constant,
                0.15 * p.constant,
            ));
            if ratios.len() >= 3 {
                let gaps: Vec<f64> = ratios[last - 2..]
                    .iter()
                    .map(|r| (r - p.constant).abs())
                    .collect();
                let decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
                m.checks.push(Check::flag(
                    "power_gap_decreasing",
                    decreasing,
                    gaps[2],
                    0.0,
                ));
            }
        }
        Regime::ConvergentRegime => {
            let mut worst = 0.0f64;
            for i in 0..means.len() {
                for j in i + 1..means.len() {
                    let z =
                        (means[i] - means[j]).abs() / (ses[i] * ses[i] + ses[j] * ses[j]).sqrt();
                    worst = worst.max(z);
                }
            }
            m.checks
                .push(Check::flag("convergent_means", worst < 3.0, worst, 3.0));
            if samples.len() >= 2 {
                let k = samples.len();
                let centered = |v: &[f64]| {
                    let mean = v.iter().sum::<f64>() / v.len() as f64;
                    v.iter().map(|x| x - mean).collect::<Vec<_>>()
                };
                let report = ks_two_sample(&centered(&samples[k - 2]), &centered(&samples[k - 1]))?;
                m.checks.push(Check::ks(
                    format!("convergent_ks@{}v{}", xs[k - 2], xs[k - 1]),
                    report,
                ));
            }
            let limit = expected_tnn_limit(config.spec)?;
            m.values.insert("expected_limit".into(), limit);
            let top = means.len() - 1;
            m.checks.push(
                Check::within("limit_vs_mean", means[top], limit, 3.0 * ses[top]).informational(),
            );
        }
        Regime::GaussianRegime => {}
    }
    Ok(csv)
}

fn run_clt(config: &RunConfig, m: &mut Manifest) -> Result<()> {
    for &n in &config.n {
        let seed = point_seed(config, n);
        let (z, c) = clt_standardized(config.spec, n, config.replications, seed)?;
        let mut summaries = BTreeMap::new();
        summaries.insert(
            "standardized".into(),
            McSummary::from_samples(&z, config.retain_samples),
        );
        let mut reference = BTreeMap::new();
        reference.insert("rate".into(), c.rate);
        reference.insert("limit_variance".into(), c.limit_variance);
        reference.insert("empirical_mean".into(), c.empirical_mean);
        reference.insert(
            "empirical_scaled_variance".into(),
            c.empirical_scaled_variance,
        );
        m.checks.push(Check::ks(format!("clt_ks@{n}"), c.ks));
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference,
        });
    }
    m.prediction = config
        .n
        .iter()
        .max()
        .and_then(|&n| predict(config.spec, n).ok());
    Ok(())
}

fn run_identity(config: &RunConfig, m: &mut Manifest) -> Result<String> {
    let mut csv = format!("{}\n", TourResult::CSV_HEADER);
    let spec = config.spec;
    for &n in &config.n {
        let seed = point_seed(config, n);
        let (direct_seed, surrogate_seed, stream_seed) = (
            split_seed(seed, 0),
            split_seed(seed, 1),
            split_seed(seed, 2),
        );
        let direct = draw_tours(spec, n, config.replications, direct_seed, Mode::Direct)?;
        tour_rows(&mut csv, &direct, direct_seed, n);
        let stream = draw_tours(spec, n, config.replications, stream_seed, Mode::Streaming)?;
        let surrogate = replicate(config.replications, |r| {
            spec.surrogate_sum_unchecked(n, &mut RngStream::derived(surrogate_seed, r as u64))
        });
        let mins: Vec<f64> = direct.iter().map(|t| t.mins_sum).collect();
        let mut summaries = BTreeMap::new();
        summaries.insert(
            "direct_total".into(),
            McSummary::from_samples(&totals(&direct), config.retain_samples),
        );
        summaries.insert(
            "streaming_total".into(),
            McSummary::from_samples(&totals(&stream), config.retain_samples),
        );
        summaries.insert(
            "direct_mins_sum".into(),
            McSummary::from_samples(&mins, config.retain_samples),
        );
        summaries.insert(
            "surrogate_sum".into(),
            McSummary::from_samples(&surrogate, config.retain_samples),
        );
        m.checks.push(Check::ks(
            format!("lemma1_ks@{n}"),
            ks_two_sample(&mins, &surrogate)?,
        ));
        m.checks.push(Check::ks(
            format!("streaming_ks@{n}"),
            ks_two_sample(&totals(&direct), &totals(&stream))?,
        ));
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference: BTreeMap::new(),
        });
    }
    Ok(csv)
}

fn run_expect(config: &RunConfig, m: &mut Manifest) -> Result<String> {
    let mut csv = format!("{}\n", TourResult::CSV_HEADER);
    for &n in &config.n {
        let seed = point_seed(config, n);
        let tours = draw_tours(config.spec, n, config.replications, seed, config.mode)?;
        tour_rows(&mut csv, &tours, seed, n);
        let s = McSummary::from_samples(&totals(&tours), config.retain_samples);
        let integral = expected_tnn_integral(config.spec, n)?;
        let mut reference = BTreeMap::new();
        reference.insert("integral".into(), integral);
        m.checks.push(Check::within(
            format!("mc_mean@{n}"),
            s.mean,
            integral,
            3.0 * s.std_error,
        ));
        if let DistributionSpec::Exponential { mean } = config.spec {
            let closed = mean * expected_tnn_exponential(n)?;
            reference.insert("closed_form".into(), closed);
            m.checks.push(Check::within(
                format!("integral_vs_closed_form@{n}"),
                integral,
                closed,
                1e-7 * mean.max(1.0),
            ));
        }
        let mut summaries = BTreeMap::new();
        summaries.insert("total".into(), s);
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference,
        });
    }
    Ok(csv)
}

/// Greedy-over-optimal ratio above which the doubling bound for metric
/// instances would be violated.
fn metric_bound(n: usize) -> f64 {
    0.5 * (n as f64).log2().ceil() + 0.5
}

fn run_compare_opt(config: &RunConfig, m: &mut Manifest) -> Result<String> {
    let mut csv = format!("{}\n", OptRow::CSV_HEADER);
    let (mut disagreements, mut dominance_failures, mut violations, mut instances) =
        (0usize, 0usize, 0usize, 0usize);
    let mut worst_diff = 0.0f64;
    for &n in &config.n {
        let seed = point_seed(config, n);
        let results = replicate(config.replications, |r| -> Result<(OptRow, f64, bool)> {
            let s = split_seed(seed, r as u64);
            let inst = Instance::generate(n, config.spec, s)?;
            let hk = held_karp(&inst)?.optimal_length;
            let diff = if n <= BRUTE_FORCE_MAX_N.min(10) {
                (brute_force(&inst)?.optimal_length - hk).abs()
            } else {
                0.0
            };
            let mut dominated = true;
            let mut t0 = f64::NAN;
            for start in 0..n {
                let t = nn_tour(&inst, start)?.total;
                if start == 0 {
                    t0 = t;
                }
                dominated &= hk <= t * (1.0 + 1e-12);
            }
            Ok((
                OptRow {
                    seed: s,
                    n,
                    t_opt: hk,
                    t_nn: t0,
                    ratio: t0 / hk,
                },
                diff,
                dominated,
            ))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let mut ratio = Vec::with_capacity(results.len());
        for (row, diff, dominated) in &results {
            instances += 1;
            worst_diff = worst_diff.max(*diff);
            disagreements += usize::from(*diff > 1e-12);
            dominance_failures += usize::from(!dominated);
            violations += usize::from(row.ratio > metric_bound(n));
            ratio.push(row.ratio);
            csv.push_str(&row.csv_row());
            csv.push('\n');
        }
        let opt: Vec<f64> = results.iter().map(|r| r.0.t_opt).collect();
        let nn: Vec<f64> = results.iter().map(|r| r.0.t_nn).collect();
        let mut summaries = BTreeMap::new();
        summaries.insert("t_opt".into(), McSummary::from_samples(&opt, false));
        summaries.insert("t_nn".into(), McSummary::from_samples(&nn, false));
        summaries.insert("ratio".into(), McSummary::from_samples(&ratio, false));
        m.points.push(PointResult {
            n,
            seed,
            summaries,
            reference: BTreeMap::new(),
        });
    }
    m.values.insert("instances".into(), instances as f64);
    m.checks.push(Check::flag(
        "brute_force_equals_held_karp",
        disagreements == 0,
        worst_diff,
        1e-12,
    ));
    m.checks.push(Check::flag(
        "opt_dominates_all_starts",
        dominance_failures == 0,
        dominance_failures as f64,
        0.0,
    ));
    m.checks
        .push(Check::flag("metric_bound_violations", true, violations as f64, 0.0).informational());
    Ok(csv)
}

fn write_outputs(dir: &Path, config: &RunConfig, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("manifest.json"), out.manifest.to_json()?)?;
    let timing = serde_json::json!({ "wall_seconds": out.wall_seconds, "threads": config.threads });
    fs::write(
        dir.join("timing.json"),
        serde_json::to_string_pretty(&timing)? + "\n",
    )?;
    if let Some(rows) = &out.replications_csv {
        fs::write(dir.join("replications.csv"), rows)?;
    }
    if let Some(plot) = &out.plot_csv {
        fs::write(dir.join("plot.csv"), plot)?;
    }
    Ok(())
}
