//! `testsched`: simulations, sweeps and constant checks for scheduling with
//! testing.

mod bounds;
mod input;
mod sweep;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use testsched::analysis::random::rand_lb_q_star;
use testsched::analysis::verify::{verify_constants, ConstantCheck, VerifyError};
use testsched::engine::{run_expected, trial_rng};
use testsched::model::{cost_of_trace, instance_to_json, trace_from_jsonl};
use testsched::{optimal, simulate, AlgorithmSpec, EngineError, Instance, NumericMode, Objective, RatioReport, Time};

use input::{emit, to_json, InstanceArgs};

/// A usage error: bad flags, specs or parameters. Exits with status 2.
#[derive(Debug)]
pub struct Usage(String);

impl Usage {
    pub fn new(msg: impl Into<String>) -> Self {
        Usage(msg.into())
    }
}

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// A check that ran and failed. Exits with status 1 after printing.
#[derive(Debug)]
pub struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

#[derive(Parser)]
#[command(name = "testsched", version, about = "Scheduling with testing: simulate, sweep and verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one instance and report ALG, OPT and their ratio.
    Simulate(SimulateArgs),
    /// Run one algorithm over a parameter grid and emit CSV.
    Sweep(sweep::SweepArgs),
    /// Recompute the analytic constants and compare each with its reference value.
    VerifyConstants(VerifyArgs),
    /// Run the lower-bound constructions against algorithms.
    LowerBound(bounds::LowerBoundArgs),
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Check a JSON-lines trace against an instance and report its costs.
    Replay(ReplayArgs),
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunArgs {
    /// Algorithm, e.g. `threshold` or `random[T=1.75,E=2.86]`.
    #[arg(long)]
    pub alg: String,
    /// Objective; defaults to the one the algorithm is designed for.
    #[arg(long)]
    pub objective: Option<Objective>,
    /// `float` or `rational`.
    #[arg(long, default_value = "float")]
    pub numeric: NumericMode,
    /// Master seed; required for randomized algorithms and generators.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo trials for randomized algorithms.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Enumerate the algorithm's randomness when the support is small.
    #[arg(long)]
    pub exact: bool,
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Write the trace as JSON lines (trial 0 for randomized algorithms).
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Shift a reference value, `name=delta`; repeatable.
    #[arg(long, value_name = "NAME=DELTA")]
    perturb: Vec<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenArgs {
    /// Generator name.
    name: String,
    /// Generator parameters, `key=value`.
    #[arg(value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ReplayArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Trace JSON-lines file.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, default_value = "float")]
    numeric: NumericMode,
    /// Fail unless the total completion time equals this value.
    #[arg(long)]
    expect_total: Option<f64>,
    /// Fail unless the makespan equals this value.
    #[arg(long)]
    expect_makespan: Option<f64>,
    /// Absolute tolerance for the expectations.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub algorithm: String,
    pub instance: String,
    pub objective: Objective,
    pub numeric: NumericMode,
    pub n: usize,
    pub exact: bool,
    #[serde(flatten)]
    pub report: RatioReport,
}

impl RunArgs {
    pub fn spec(&self) -> Result<AlgorithmSpec> {
        self.alg.parse::<AlgorithmSpec>().map_err(|e| Usage::new(e.to_string()).into())
    }

    pub fn check(&self, spec: &AlgorithmSpec) -> Result<()> {
        if spec.is_randomized() && self.seed.is_none() {
            return Err(Usage::new(format!("`{}` is randomized: pass --seed", spec.key())).into());
        }
        if self.trials == 0 {
            return Err(Usage::new("--trials must be at least 1").into());
        }
        Ok(())
    }

    pub fn objective_for(&self, spec: &AlgorithmSpec) -> Objective {
        self.objective.unwrap_or_else(|| spec.objective())
    }
}

/// Algorithm cost (mean for randomized algorithms), optimum and run details.
pub fn evaluate<T: Time>(
    args: &RunArgs,
    spec: &AlgorithmSpec,
    instance: &Instance<T>,
    trace_out: Option<&std::path::Path>,
) -> Result<(RatioReport, bool)> {
    let objective = args.objective_for(spec);
    let opt = optimal(instance, objective).to_f64();
    let seed = args.seed.unwrap_or(0);
    if let Some(path) = trace_out {
        let mut alg = spec.instantiate::<T>(trial_rng(seed, 0));
        let trace = simulate(&mut alg, instance)?;
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        trace.write_jsonl(std::io::BufWriter::new(file))?;
    }
    if spec.is_randomized() {
        let e = run_expected(spec, instance, objective, args.trials, seed, args.exact)?;
        return Ok((RatioReport::new(e.mean, opt, e.trials, e.stderr), e.exact));
    }
    let mut alg = spec.build::<T>(seed);
    let trace = simulate(&mut alg, instance)?;
    Ok((RatioReport::deterministic(objective.of(&trace).to_f64(), opt), true))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let spec = args.run.spec()?;
    args.run.check(&spec)?;
    let report = match args.run.numeric {
        NumericMode::Float => simulate_with::<f64>(&args, &spec)?,
        NumericMode::Rational => simulate_with::<testsched::Rational>(&args, &spec)?,
    };
    emit(args.output.as_deref(), &to_json(&report))
}

fn simulate_with<T: Time>(args: &SimulateArgs, spec: &AlgorithmSpec) -> Result<SimulateReport> {
    let instance: Instance<T> = args.instance.load(args.run.seed)?;
    let (report, exact) = evaluate(&args.run, spec, &instance, args.trace.as_deref())?;
    Ok(SimulateReport {
        algorithm: spec.to_string(),
        instance: args.instance.describe(),
        objective: args.run.objective_for(spec),
        numeric: args.run.numeric,
        n: instance.n(),
        exact,
        report,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    all_pass: bool,
    failed: Vec<String>,
    q_star: f64,
    checks: Vec<ConstantCheck>,
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let mut overrides = BTreeMap::new();
    for p in &args.perturb {
        let (name, delta) = p.split_once('=').ok_or_else(|| Usage::new(format!("expected name=delta, got `{p}`")))?;
        let delta: f64 = delta.trim().parse().map_err(|_| Usage::new(format!("bad delta in `{p}`")))?;
        overrides.insert(name.trim().to_string(), delta);
    }
    let checks = verify_constants(&overrides).map_err(|e| match e {
        VerifyError::UnknownConstant(_) => anyhow::Error::new(Usage::new(e.to_string())),
        other => other.into(),
    })?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let report = VerifyReport { all_pass: failed.is_empty(), failed: failed.clone(), q_star: rand_lb_q_star(), checks };
    emit(args.output.as_deref(), &to_json(&report))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failed(format!("constants outside tolerance: {}", failed.join(", "))).into())
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let source = InstanceArgs { gen: Some(args.name), params: args.params, ..Default::default() };
    let instance: Instance<f64> = source.load(args.seed)?;
    emit(args.output.as_deref(), &(instance_to_json(&instance) + "\n"))
}

#[derive(Serialize)]
struct ReplayReport {
    n: usize,
    steps: usize,
    total_completion: f64,
    makespan: f64,
}

fn cmd_replay(args: ReplayArgs) -> Result<()> {
    let report = match args.numeric {
        NumericMode::Float => replay_with::<f64>(&args)?,
        NumericMode::Rational => replay_with::<testsched::Rational>(&args)?,
    };
    emit(None, &to_json(&report))?;
    for (label, expected, actual) in [
        ("total completion time", args.expect_total, report.total_completion),
        ("makespan", args.expect_makespan, report.makespan),
    ] {
        if let Some(x) = expected {
            if (x - actual).abs() > args.tol {
                return Err(Failed(format!("{label} is {actual}, expected {x}")).into());
            }
        }
    }
    Ok(())
}

fn replay_with<T: Time>(args: &ReplayArgs) -> Result<ReplayReport> {
    let source = InstanceArgs { instance: Some(args.instance.clone()), ..Default::default() };
    let instance: Instance<T> = source.load(None)?;
    let file = File::open(&args.trace).with_context(|| format!("opening {}", args.trace.display()))?;
    let trace = trace_from_jsonl::<T, _>(BufReader::new(file), instance.n())
        .map_err(|e| Failed(format!("{}: {e}", args.trace.display())))?;
    trace.verify_against(&instance).map_err(|e| Failed(format!("{}: {e}", args.trace.display())))?;
    let (total, makespan) = cost_of_trace(&trace).map_err(|e| Failed(e.to_string()))?;
    Ok(ReplayReport { n: instance.n(), steps: trace.steps().len(), total_completion: total.to_f64(), makespan: makespan.to_f64() })
}

fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var("TESTSCHED_WORKERS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Usage::new(format!("TESTSCHED_WORKERS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting worker pool")?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<EngineError>() {
        Some(EngineError::Config(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers().and_then(|()| match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => sweep::cmd_sweep(a),
        Command::VerifyConstants(a) => cmd_verify(a),
        Command::LowerBound(a) => bounds::cmd_lower_bound(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Replay(a) => cmd_replay(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
