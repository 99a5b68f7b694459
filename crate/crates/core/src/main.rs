use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mftsp::asymptotics::predict;
use mftsp::harness::{
    self, config::parse_grid, preset, Command as RunCommand, Mode, RunConfig, PRESETS,
};
use mftsp::DistributionSpec;

#[derive(Parser)]
#[command(
    name = "mftsp",
    version,
    about = "Nearest-neighbor tours on the mean-field TSP"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate tours and summarize their length.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Check the first + last edge against the weight law.
        #[arg(long)]
        first_last_checks: bool,
    },
    /// Fit mean tour length over an n-grid against the predicted growth.
    Scaling(RunArgs),
    /// Test standardized totals against the Gaussian limit (Weibull, shape >= 2).
    Clt(RunArgs),
    /// Compare direct forward minima with independent W_i, and streaming with direct totals.
    Identity(RunArgs),
    /// Compute the optimal-tour constant for exponential weights.
    Wastlund {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare the Monte Carlo mean with the exact expectation.
    Expect(RunArgs),
    /// Compare nearest neighbor with exact optima on small instances.
    CompareOpt(RunArgs),
    /// Run a named preset.
    Preset {
        /// One of the names printed by `mftsp presets`.
        name: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a config file (key = value lines or a JSON object).
    Config {
        path: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List preset names.
    Presets,
    /// Print the asymptotic prediction for a weight law as JSON.
    Predict {
        #[arg(long, default_value = "exponential")]
        spec: DistributionSpec,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Weight law, e.g. `exponential` or `kind=weibull shape=1.5 scale=1`.
    #[arg(long, default_value = "exponential")]
    spec: DistributionSpec,
    /// n or an n-grid: `1000`, `2^7..2^13`, `5..10`, `256,1024`.
    #[arg(long, default_value = "1000")]
    n: String,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = harness::config::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "direct")]
    mode: Mode,
    /// Keep sorted samples in the manifest.
    #[arg(long)]
    retain_samples: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Directory for manifest.json, timing.json and CSV outputs.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the full manifest instead of the check table.
    #[arg(long)]
    json: bool,
}

impl OutArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.threads = self.threads;
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
    }
}

fn from_args(command: RunCommand, a: &RunArgs) -> mftsp::Result<RunConfig> {
    let mut cfg = RunConfig::new(command, a.spec)
        .with_n(parse_grid(&a.n)?)
        .with_replications(a.reps)
        .with_seed(a.seed)
        .with_mode(a.mode);
    cfg.retain_samples = a.retain_samples;
    a.out.apply(&mut cfg);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd) -> mftsp::Result<bool> {
    let (cfg, json) = match cmd {
        Cmd::Presets => {
            for p in PRESETS {
                println!("{p}");
            }
            return Ok(true);
        }
        Cmd::Predict { spec, n } => {
            println!("{}", serde_json::to_string_pretty(&predict(spec, n)?)?);
            return Ok(true);
        }
        Cmd::Simulate {
            run,
            first_last_checks,
        } => {
            let mut cfg = from_args(RunCommand::Simulate, &run)?;
            cfg.first_last_checks = first_last_checks;
            (cfg, run.out.json)
        }
        Cmd::Scaling(a) => (from_args(RunCommand::Scaling, &a)?, a.out.json),
        Cmd::Clt(a) => (from_args(RunCommand::Clt, &a)?, a.out.json),
        Cmd::Identity(a) => (from_args(RunCommand::Identity, &a)?, a.out.json),
        Cmd::Expect(a) => (from_args(RunCommand::Expect, &a)?, a.out.json),
        Cmd::CompareOpt(a) => (from_args(RunCommand::CompareOpt, &a)?, a.out.json),
        Cmd::Wastlund { out } => {
            let mut cfg = RunConfig::new(RunCommand::Wastlund, DistributionSpec::exponential(1.0)?)
                .with_n(vec![]);
            out.apply(&mut cfg);
            (cfg, out.json)
        }
        Cmd::Preset { name, out } => {
            let mut cfg = preset(&name)?;
            out.apply(&mut cfg);
            (cfg, out.json)
        }
        Cmd::Config { path, out } => {
            let mut cfg = RunConfig::from_config_str(&std::fs::read_to_string(&path)?)?;
            out.apply(&mut cfg);
            (cfg, out.json)
        }
    };
    let result = harness::run(&cfg)?;
    let m = &result.manifest;
    if json {
        print!("{}", m.to_json()?);
    } else {
        for (k, v) in &m.values {
            println!("{k} = {v}");
        }
        for c in &m.checks {
            let status = match (c.pass, c.enforced) {
                (true, _) => "pass",
                (false, true) => "FAIL",
                (false, false) => "note",
            };
            println!(
                "{status:4}  {:<36} value={:<14.8} target={:<12.8} tol={:.3e}",
                c.name, c.value, c.target, c.tolerance
            );
        }
        println!(
            "{} in {:.2} s",
            if m.all_pass {
                "all checks pass"
            } else {
                "checks failed"
            },
            result.wall_seconds
        );
    }
    Ok(m.all_pass)
}
