use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use rayon::prelude::*;
use serde::Serialize;
use testsched::analysis::{det_lb, random as rand_analysis};
use testsched::engine::{mean_stderr, trial_rng, trial_seed};
use testsched::generators::{rand_lb, DetLbAdversary, DetLbProfile, RandLbProfile};
use testsched::{optimal, run, simulate, AlgorithmSpec, Instance, Objective};

use crate::input::{emit, to_json};
use crate::Usage;

#[derive(clap::Args)]
pub struct LowerBoundArgs {
    #[command(subcommand)]
    kind: Kind,
}

#[derive(Subcommand)]
enum Kind {
    /// Adaptive adversary against deterministic algorithms.
    Det(DetArgs),
    /// Random instances against any algorithm.
    Rand(RandArgs),
}

#[derive(clap::Args)]
struct DetArgs {
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = det_lb::DELTA_STAR)]
    delta: f64,
    #[arg(long = "p-bar", default_value_t = det_lb::P_BAR_STAR)]
    p_bar: f64,
    /// Algorithms to run; `best` is the schedule family at the best
    /// response to `(δ, p̄)`. Defaults to threshold, delay_all, combined,
    /// ute and best.
    #[arg(long)]
    alg: Vec<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct RandArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Probability of `p = 0`; defaults to the maximizer `1 − 1/√3`.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Algorithms to run; defaults to threshold and random.
    #[arg(long)]
    alg: Vec<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
pub struct DetRow {
    pub algorithm: String,
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub long_jobs: usize,
}

#[derive(Serialize)]
pub struct DetReport {
    pub kind: &'static str,
    pub n: usize,
    pub delta: f64,
    pub p_bar: f64,
    pub analytic: f64,
    pub min_ratio: f64,
    pub rows: Vec<DetRow>,
}

#[derive(Serialize)]
pub struct RandRow {
    pub algorithm: String,
    pub mean_alg: f64,
    pub stderr_alg: f64,
    pub mean_opt: f64,
    pub stderr_opt: f64,
    pub ratio: f64,
    /// Half-width of a 95% interval for `ratio`.
    pub ratio_ci: f64,
}

#[derive(Serialize)]
pub struct RandReport {
    pub kind: &'static str,
    pub n: usize,
    pub q: f64,
    pub trials: usize,
    pub analytic: f64,
    pub opt_closed_form: f64,
    pub alg_lower_bound: f64,
    pub rows: Vec<RandRow>,
}

fn resolve(name: &str, delta: f64, p_bar: f64) -> Result<AlgorithmSpec> {
    if name == "best" {
        let (nu, lambda, _) = det_lb::best_response(delta, p_bar);
        return Ok(AlgorithmSpec::Family { nu, lambda });
    }
    name.parse().map_err(|e: testsched::SpecError| Usage::new(e.to_string()).into())
}

fn names(given: &[String], default: &[&str]) -> Vec<String> {
    if given.is_empty() {
        default.iter().map(|s| s.to_string()).collect()
    } else {
        given.to_vec()
    }
}

pub fn cmd_lower_bound(args: LowerBoundArgs) -> Result<()> {
    match args.kind {
        Kind::Det(a) => {
            let report = det_report(&a)?;
            emit(a.output.as_deref(), &to_json(&report))
        }
        Kind::Rand(a) => {
            let report = rand_report(&a)?;
            emit(a.output.as_deref(), &to_json(&report))
        }
    }
}

fn det_report(a: &DetArgs) -> Result<DetReport> {
    let profile = DetLbProfile { n: a.n, delta: a.delta, p_bar: a.p_bar };
    DetLbAdversary::new(profile).map_err(|e| Usage::new(e.to_string()))?;
    let analytic = det_lb::det_lb_value(a.delta, a.p_bar).map_err(|e| Usage::new(e.to_string()))?;
    let specs: Vec<(String, AlgorithmSpec)> = names(&a.alg, &["threshold", "delay_all", "combined", "ute", "best"])
        .into_iter()
        .map(|name| resolve(&name, a.delta, a.p_bar).map(|s| (name, s)))
        .collect::<Result<_>>()?;
    if let Some((name, _)) = specs.iter().find(|(_, s)| s.is_randomized()) {
        return Err(Usage::new(format!("`{name}` is randomized; the adaptive adversary targets deterministic algorithms")).into());
    }
    let rows: Vec<DetRow> = specs
        .par_iter()
        .map(|(_, spec)| -> Result<DetRow> {
            let mut adversary = DetLbAdversary::new(profile).expect("checked");
            let upper = adversary.upper_limits::<f64>();
            let out = run(&mut spec.build::<f64>(0), &mut adversary, &upper)?;
            let alg_cost = *out.trace.total_completion();
            let opt_cost = optimal(&out.realized, Objective::Sum);
            Ok(DetRow {
                algorithm: spec.to_string(),
                alg_cost,
                opt_cost,
                ratio: testsched::model::ratio(alg_cost, opt_cost),
                long_jobs: adversary.long_jobs().len(),
            })
        })
        .collect::<Result<_>>()?;
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(DetReport { kind: "det", n: a.n, delta: a.delta, p_bar: a.p_bar, analytic, min_ratio, rows })
}

fn rand_report(a: &RandArgs) -> Result<RandReport> {
    let seed = a.seed.ok_or_else(|| Usage::new("lower-bound rand draws random instances: pass --seed"))?;
    if a.trials == 0 {
        return Err(Usage::new("--trials must be at least 1").into());
    }
    let q = a.q.unwrap_or_else(rand_analysis::rand_lb_q_star);
    let analytic = rand_analysis::rand_lb_value(q).map_err(|e| Usage::new(e.to_string()))?;
    let profile = RandLbProfile { n: a.n, q };
    let specs: Vec<AlgorithmSpec> = names(&a.alg, &["threshold", "random"])
        .iter()
        .map(|name| resolve(name, 0.0, 2.0))
        .collect::<Result<_>>()?;
    // Every algorithm sees the same instances.
    let instances: Vec<Instance<f64>> = (0..a.trials as u64)
        .into_par_iter()
        .map(|i| rand_lb(&profile, trial_seed(seed, i)))
        .collect::<Result<_, _>>()
        .map_err(|e| Usage::new(e.to_string()))?;
    let opts: Vec<f64> = instances.par_iter().map(|inst| optimal(inst, Objective::Sum)).collect();
    let (mean_opt, stderr_opt) = mean_stderr(&opts);
    let rows = specs
        .iter()
        .map(|spec| -> Result<RandRow> {
            let algs: Vec<f64> = instances
                .par_iter()
                .enumerate()
                .map(|(i, inst)| {
                    let mut alg = spec.instantiate::<f64>(trial_rng(trial_seed(seed, i as u64), 1));
                    simulate(&mut alg, inst).map(|t| *t.total_completion())
                })
                .collect::<Result<_, _>>()?;
            let (mean_alg, stderr_alg) = mean_stderr(&algs);
            let ratio = mean_alg / mean_opt;
            let rel = ((stderr_alg / mean_alg).powi(2) + (stderr_opt / mean_opt).powi(2)).sqrt();
            Ok(RandRow {
                algorithm: spec.to_string(),
                mean_alg,
                stderr_alg,
                mean_opt,
                stderr_opt,
                ratio,
                ratio_ci: 1.96 * ratio * if rel.is_finite() { rel } else { 0.0 },
            })
        })
        .collect::<Result<_>>()?;
    Ok(RandReport {
        kind: "rand",
        n: a.n,
        q,
        trials: a.trials,
        analytic,
        opt_closed_form: rand_analysis::rand_lb_expected_opt(a.n, q),
        alg_lower_bound: rand_analysis::rand_lb_alg_bound(a.n, q),
        rows,
    })
}
