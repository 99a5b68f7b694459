//! Run configuration, its flat key-value / JSON file form, and the presets
//! that pin the default replication counts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Per-replication tours at each n, optionally with first/last-edge checks.
    Simulate,
    /// Means over an n-grid against the regime's growth law.
    Scaling,
    /// Standardized totals against the normal limit (streaming draws).
    Clt,
    /// Direct forward minima against independent `W_i`, and streaming against
    /// direct totals.
    Identity,
    /// The optimal-tour constant for exponential weights.
    Wastlund,
    /// Monte Carlo mean against the exact expectation.
    Expect,
    /// Nearest neighbor against exact optima on small instances.
    CompareOpt,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Simulate,
        Command::Scaling,
        Command::Clt,
        Command::Identity,
        Command::Wastlund,
        Command::Expect,
        Command::CompareOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Scaling => "scaling",
            Command::Clt => "clt",
            Command::Identity => "identity",
            Command::Wastlund => "wastlund",
            Command::Expect => "expect",
            Command::CompareOpt => "compare-opt",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s || (s == "compare_opt" && *c == Command::CompareOpt))
            .ok_or_else(|| Error::Config(format!("unknown command `{s}`")))
    }
}

/// How a replication obtains its tour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Generate the full instance and run the greedy tour from city 0.
    #[default]
    Direct,
    /// Sample the edge decomposition without building an instance.
    Streaming,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Mode::Direct),
            "streaming" | "stream" => Ok(Mode::Streaming),
            _ => Err(Error::Config(format!(
                "unknown mode `{s}` (direct | streaming)"
            ))),
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec: DistributionSpec,
    /// A single n or an n-grid, in the order given.
    pub n: Vec<usize>,
    /// Replications per grid point.
    pub replications: usize,
    pub master_seed: u64,
    /// Worker threads; 0 keeps the global pool.
    pub threads: usize,
    pub output: Option<PathBuf>,
    pub retain_samples: bool,
    pub mode: Mode,
    /// `simulate` only: check the first + last edge law against `F`.
    pub first_last_checks: bool,
}

impl RunConfig {
    pub fn new(command: Command, spec: DistributionSpec) -> Self {
        Self {
            command,
            spec,
            n: vec![1000],
            replications: 1000,
            master_seed: DEFAULT_SEED,
            threads: 0,
            output: None,
            retain_samples: false,
            mode: Mode::Direct,
            first_last_checks: false,
        }
    }

    pub fn with_n(mut self, n: Vec<usize>) -> Self {
        self.n = n;
        self
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("bad {what} `{value}` for key `{key}`"));
        match key.trim() {
            "command" => self.command = value.parse()?,
            "spec" => self.spec = value.parse()?,
            "n" | "grid" | "n_grid" => self.n = parse_grid(value)?,
            "replications" | "reps" => {
                self.replications = parse_count(value).map_err(|_| bad("count"))?
            }
            "master_seed" | "seed" => self.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "threads" => self.threads = value.parse().map_err(|_| bad("thread count"))?,
            "output" => self.output = Some(PathBuf::from(value)),
            "retain_samples" => {
                self.retain_samples = parse_bool(value).ok_or_else(|| bad("boolean"))?
            }
            "mode" => self.mode = value.parse()?,
            "first_last_checks" => {
                self.first_last_checks = parse_bool(value).ok_or_else(|| bad("boolean"))?
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Reads a config from either JSON (an object whose values are strings,
    /// numbers, booleans or arrays of n) or `key = value` lines with `#`
    /// comments. `command` and `spec` are required.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let pairs = if text.trim_start().starts_with('{') {
            json_pairs(text)?
        } else {
            kv_pairs(text)?
        };
        let find = |k: &str| {
            pairs
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.clone())
        };
        let command: Command = find("command")
            .ok_or_else(|| Error::Config("config is missing `command`".into()))?
            .parse()?;
        let spec = match find("spec") {
            Some(s) => s.parse()?,
            None if command == Command::Wastlund => DistributionSpec::exponential(1.0)?,
            None => return Err(Error::Config("config is missing `spec`".into())),
        };
        let mut cfg = RunConfig::new(command, spec);
        for (k, v) in &pairs {
            if k != "command" && k != "spec" {
                cfg.set(k, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.command != Command::Wastlund {
            if self.n.is_empty() {
                return Err(Error::Config("empty n-grid".into()));
            }
            if self.replications == 0 {
                return Err(Error::Config("replications must be positive".into()));
            }
        }
        Ok(())
    }

    /// The deterministic part of the config, as echoed in the manifest.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            command: self.command,
            spec: self.spec,
            n: self.n.clone(),
            replications: self.replications,
            master_seed: self.master_seed,
            mode: self.mode,
            retain_samples: self.retain_samples,
            first_last_checks: self.first_last_checks,
        }
    }
}

/// Config fields that determine the results. Thread count and output path
/// are left out so manifests compare byte for byte across machines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: Command,
    pub spec: DistributionSpec,
    pub n: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub mode: Mode,
    pub retain_samples: bool,
    pub first_last_checks: bool,
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// Integer, power of two (`2^13`) or integral float (`1e4`).
fn parse_count(s: &str) -> Result<usize> {
    let s = s.trim();
    let bad = || Error::Config(format!("bad integer `{s}`"));
    if let Some(exp) = s.strip_prefix("2^") {
        let k: u32 = exp.parse().map_err(|_| bad())?;
        if k >= usize::BITS {
            return Err(bad());
        }
        return Ok(1usize << k);
    }
    if let Ok(v) = s.replace('_', "").parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| bad())?;
    if f >= 0.0 && f.fract() == 0.0 && f < 1e18 {
        Ok(f as usize)
    } else {
        Err(bad())
    }
}

/// Parses `1000`, `256,1024,4096`, `5..10` (inclusive) or `2^7..2^13`
/// (every power of two in between).
pub fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (a.trim(), b.trim());
                if a.starts_with("2^") && b.starts_with("2^") {
                    let lo: u32 = a[2..]
                        .parse()
                        .map_err(|_| Error::Config(format!("bad grid `{item}`")))?;
                    let hi: u32 = b[2..]
                        .parse()
                        .map_err(|_| Error::Config(format!("bad grid `{item}`")))?;
                    if hi >= usize::BITS || lo > hi {
                        return Err(Error::Config(format!("bad grid `{item}`")));
                    }
                    out.extend((lo..=hi).map(|k| 1usize << k));
                } else {
                    let (lo, hi) = (parse_count(a)?, parse_count(b)?);
                    if lo > hi {
                        return Err(Error::Config(format!("empty range `{item}`")));
                    }
                    out.extend(lo..=hi);
                }
            }
            None => out.push(parse_count(item)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!("empty n-grid `{s}`")));
    }
    Ok(out)
}

fn kv_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().trim_matches('"').to_string()));
    }
    Ok(pairs)
}

fn json_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let map: BTreeMap<String, serde_json::Value> = serde_json::from_str(text)?;
    map.into_iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        _ => Err(Error::Config(format!("bad array entry for `{k}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .join(","),
                _ => return Err(Error::Config(format!("unsupported value for `{k}`"))),
            };
            Ok((k, s))
        })
        .collect()
}

/// Named configurations with the replication counts used for verification.
pub const PRESETS: [&str; 15] = [
    "wastlund",
    "exp-mean",
    "log-scaling-exponential",
    "log-scaling-uniform",
    "power-scaling",
    "convergent",
    "clt-alpha2",
    "clt-alpha1",
    "identity-n50",
    "first-last",
    "exact",
    "gate-exponential",
    "gate-uniform",
    "gate-weibull",
    "gate-powerlaw",
];

pub fn preset(name: &str) -> Result<RunConfig> {
    let exp1 = DistributionSpec::exponential(1.0)?;
    let cfg = match name {
        "wastlund" => RunConfig::new(Command::Wastlund, exp1).with_n(vec![]),
        "exp-mean" => RunConfig::new(Command::Expect, exp1)
            .with_n(vec![5])
            .with_replications(100_000),
        "log-scaling-exponential" => RunConfig::new(Command::Scaling, exp1)
            .with_n(parse_grid("2^7..2^13")?)
            .with_replications(10_000)
            .with_mode(Mode::Streaming),
        "log-scaling-uniform" => RunConfig::new(Command::Scaling, DistributionSpec::uniform(1.0)?)
            .with_n(parse_grid("2^7..2^13")?)
            .with_replications(10_000)
            .with_mode(Mode::Streaming),
        "power-scaling" => RunConfig::new(Command::Scaling, DistributionSpec::weibull(1.5, 1.0)?)
            .with_n(parse_grid("2^7..2^20")?)
            .with_replications(1000)
            .with_mode(Mode::Streaming),
        "convergent" => RunConfig::new(Command::Scaling, DistributionSpec::weibull(0.5, 1.0)?)
            .with_n(parse_grid("2^8,2^10,2^12")?)
            .with_replications(10_000)
            .with_mode(Mode::Streaming),
        "clt-alpha2" => RunConfig::new(Command::Clt, DistributionSpec::weibull(3.0, 1.0)?)
            .with_n(vec![4096])
            .with_replications(10_000)
            .with_mode(Mode::Streaming),
        "clt-alpha1" => RunConfig::new(Command::Clt, DistributionSpec::weibull(2.0, 1.0)?)
            .with_n(vec![1 << 16])
            .with_replications(10_000)
            .with_mode(Mode::Streaming),
        "identity-n50" => RunConfig::new(Command::Identity, exp1)
            .with_n(vec![50])
            .with_replications(10_000),
        "first-last" => {
            let mut c = RunConfig::new(Command::Simulate, exp1)
                .with_n(vec![1000])
                .with_replications(10_000);
            c.first_last_checks = true;
            c
        }
        "exact" => RunConfig::new(Command::CompareOpt, exp1)
            .with_n(parse_grid("5..10")?)
            .with_replications(200),
        "gate-exponential" => gate(exp1),
        "gate-uniform" => gate(DistributionSpec::uniform(1.0)?),
        "gate-weibull" => gate(DistributionSpec::weibull(1.5, 1.0)?),
        "gate-powerlaw" => gate(DistributionSpec::power_law(-0.5, 1.0)?),
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}`; available: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(cfg)
}

fn gate(spec: DistributionSpec) -> RunConfig {
    RunConfig::new(Command::Identity, spec)
        .with_n(vec![10, 50, 200])
        .with_replications(10_000)
}
