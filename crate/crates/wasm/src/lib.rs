//! Browser demo bindings. Every export takes plain numbers or JSON text and
//! returns JSON text; the `*_json` functions are the same operations for
//! native callers.

use serde::Serialize;
use testsched::algorithms::CombinedThresholds;
use testsched::analysis::det_lb;
use testsched::analysis::uniform::{fig6_max, fig6_samples, solve_thresholds, CurvePoint};
use testsched::model::{instance_from_json, ratio, validate_instance, StepRecord};
use testsched::{optimal_sum, simulate, AlgorithmSpec, Instance, Objective, Time, Trace};
use wasm_bindgen::prelude::*;

/// Largest instance the demo simulates.
pub const MAX_JOBS: usize = 500;
/// Largest surface grid side.
pub const MAX_GRID: usize = 200;

#[derive(Serialize)]
struct CurveReport {
    t1: f64,
    t2: f64,
    max_p_bar: f64,
    max_ratio: f64,
    points: Vec<CurvePoint>,
}

/// The combined algorithm's ratio as a function of the common upper limit.
pub fn curve_json(from: f64, to: f64, points: usize) -> Result<String, String> {
    if !(from.is_finite() && to.is_finite() && from < to) || !(2..=10_000).contains(&points) {
        return Err(format!("need from < to and 2..=10000 points, got [{from}, {to}] with {points}"));
    }
    let th: CombinedThresholds = solve_thresholds().map_err(|e| e.to_string())?;
    let (max_p_bar, max_ratio) = fig6_max(th);
    let report = CurveReport { t1: th.t1, t2: th.t2, max_p_bar, max_ratio, points: fig6_samples(from, to, points, th) };
    Ok(serde_json::to_string(&report).expect("serializes"))
}

#[derive(Serialize)]
struct SimulateReport {
    algorithm: String,
    objective: Objective,
    alg_cost: f64,
    opt_cost: f64,
    ratio: f64,
    steps: Vec<StepRecord>,
    opt_steps: Vec<StepRecord>,
}

fn records(trace: &Trace<f64>) -> Vec<StepRecord> {
    trace
        .steps()
        .iter()
        .map(|s| StepRecord { t: s.start, kind: s.action.kind().to_string(), job: s.action.job(), dur: s.duration })
        .collect()
}

/// Runs `alg` on `jobs` (JSON array of `{"upper", "proc"}`) and the optimal
/// schedule alongside it. Randomized algorithms use `seed`.
pub fn simulate_json(alg: &str, jobs: &str, seed: u64) -> Result<String, String> {
    let spec: AlgorithmSpec = alg.parse().map_err(|e: testsched::SpecError| e.to_string())?;
    let instance: Instance<f64> = instance_from_json(jobs).map_err(|e| e.to_string())?;
    if instance.n() > MAX_JOBS {
        return Err(format!("at most {MAX_JOBS} jobs, got {}", instance.n()));
    }
    if let Some(v) = validate_instance(&instance).first() {
        return Err(v.to_string());
    }
    let objective = spec.objective();
    let trace = simulate(&mut spec.build::<f64>(seed), &instance).map_err(|e| e.to_string())?;
    let plan = optimal_sum(&instance);
    let opt_trace = plan.trace(&instance);
    let alg_cost = objective.of(&trace).to_f64();
    let opt_cost = objective.of(&opt_trace).to_f64();
    let report = SimulateReport {
        algorithm: spec.to_string(),
        objective,
        alg_cost,
        opt_cost,
        ratio: ratio(alg_cost, opt_cost),
        steps: records(&trace),
        opt_steps: records(&opt_trace),
    };
    Ok(serde_json::to_string(&report).expect("serializes"))
}

#[derive(Serialize)]
struct Surface {
    deltas: Vec<f64>,
    p_bars: Vec<f64>,
    /// `values[i][j]` at `(deltas[j], p_bars[i])`.
    values: Vec<Vec<f64>>,
    best_delta: f64,
    best_p_bar: f64,
    best_value: f64,
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// The deterministic lower-bound ratio `R(δ, p̄)` on a grid.
pub fn surface_json(delta: (f64, f64), p_bar: (f64, f64), nx: usize, ny: usize) -> Result<String, String> {
    if !(2..=MAX_GRID).contains(&nx) || !(2..=MAX_GRID).contains(&ny) {
        return Err(format!("grid sides must lie in 2..={MAX_GRID}"));
    }
    if !(0.0 <= delta.0 && delta.0 < delta.1 && delta.1 <= 1.0 && 1.0 < p_bar.0 && p_bar.0 < p_bar.1) {
        return Err("need 0 ≤ δ_min < δ_max ≤ 1 and 1 < p̄_min < p̄_max".into());
    }
    let deltas = axis(delta.0, delta.1, nx);
    let p_bars = axis(p_bar.0, p_bar.1, ny);
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(ny);
    for &p in &p_bars {
        let mut row = Vec::with_capacity(nx);
        for &d in &deltas {
            let v = det_lb::det_lb_value(d, p).map_err(|e| e.to_string())?;
            if v > best.2 {
                best = (d, p, v);
            }
            row.push(v);
        }
        values.push(row);
    }
    let s = Surface { deltas, p_bars, values, best_delta: best.0, best_p_bar: best.1, best_value: best.2 };
    Ok(serde_json::to_string(&s).expect("serializes"))
}

#[wasm_bindgen]
pub fn curve(from: f64, to: f64, points: usize) -> Result<String, JsError> {
    curve_json(from, to, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn run_algorithm(alg: &str, jobs: &str, seed: u32) -> Result<String, JsError> {
    simulate_json(alg, jobs, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lower_bound_surface(
    delta_min: f64,
    delta_max: f64,
    p_bar_min: f64,
    p_bar_max: f64,
    nx: usize,
    ny: usize,
) -> Result<String, JsError> {
    surface_json((delta_min, delta_max), (p_bar_min, p_bar_max), nx, ny).map_err(|e| JsError::new(&e))
}
