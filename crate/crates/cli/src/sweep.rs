use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use rayon::prelude::*;
use testsched::analysis::uniform::fig6_curve;
use testsched::generators::generate;
use testsched::algorithms::CombinedThresholds;
use testsched::{AlgorithmSpec, Instance, NumericMode, RatioReport, Time};

use crate::input::{emit, parse_params};
use crate::{evaluate, RunArgs, Usage};

#[derive(clap::Args)]
pub struct SweepArgs {
    /// Algorithm; omit together with --curve to emit only the curve.
    #[arg(long)]
    alg: Option<String>,
    /// Generator name; fixed parameters follow as `key=value` words.
    #[arg(long, value_name = "NAME")]
    gen: Option<String>,
    #[arg(value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Grid axis over a generator parameter: `name=start:stop:step` or
    /// `name=v1,v2,...`; repeatable, combined as a product.
    #[arg(long, value_name = "AXIS")]
    axis: Vec<String>,
    /// Add the combined algorithm's piecewise ratio curve at each `p_bar`.
    #[arg(long)]
    curve: bool,
    #[arg(long)]
    objective: Option<testsched::Objective>,
    #[arg(long, default_value = "float")]
    numeric: NumericMode,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    exact: bool,
    /// CSV output file; stdout by default.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// `name=start:stop:step` (inclusive of `stop` up to rounding) or `name=v1,v2`.
pub fn parse_axis(s: &str) -> Result<Axis> {
    let bad = |why: &str| Usage::new(format!("axis `{s}`: {why}"));
    let (name, spec) = s.split_once('=').ok_or_else(|| bad("expected name=..."))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step").into());
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) {
            return Err(bad("step must be positive").into());
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            Vec::new()
        } else {
            (0..=count as usize).map(|i| ((start + step * i as f64) * 1e12).round() / 1e12).collect()
        }
    } else {
        spec.split(',').filter(|v| !v.trim().is_empty()).map(num).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid").into());
    }
    Ok(Axis { name: name.trim().to_string(), values })
}

/// Every grid point, first axis varying slowest.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}

fn thresholds_of(spec: Option<&AlgorithmSpec>) -> CombinedThresholds {
    match spec {
        Some(AlgorithmSpec::Combined(t)) => *t,
        _ => CombinedThresholds::default(),
    }
}

pub fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let axes: Vec<Axis> = args.axis.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?;
    if axes.is_empty() {
        return Err(Usage::new("sweep needs at least one --axis").into());
    }
    let fixed = parse_params(&args.params)?;
    if let Some(dup) = axes.iter().find(|a| fixed.contains_key(&a.name)) {
        return Err(Usage::new(format!("`{}` is both fixed and an axis", dup.name)).into());
    }
    let spec = args.alg.as_deref().map(str::parse::<AlgorithmSpec>).transpose().map_err(|e| Usage::new(e.to_string()))?;
    if spec.is_none() && !args.curve {
        return Err(Usage::new("sweep needs --alg, --curve or both").into());
    }
    if spec.is_some() && args.gen.is_none() {
        return Err(Usage::new("sweep with --alg needs --gen").into());
    }
    let run = RunArgs {
        alg: args.alg.clone().unwrap_or_default(),
        objective: args.objective,
        numeric: args.numeric,
        seed: args.seed,
        trials: args.trials,
        exact: args.exact,
    };
    if let Some(spec) = &spec {
        run.check(spec)?;
    }
    let points = grid(&axes);
    let curve_axis = axes.iter().position(|a| a.name == "p_bar");
    if args.curve && curve_axis.is_none() && !fixed.contains_key("p_bar") {
        return Err(Usage::new("--curve needs a `p_bar` axis or parameter").into());
    }
    let thresholds = thresholds_of(spec.as_ref());
    let fixed_p_bar = fixed.get("p_bar").and_then(|v| v.parse::<f64>().ok());

    let rows: Vec<Option<(RatioReport, bool)>> = match &spec {
        None => vec![None; points.len()],
        Some(spec) => points
            .par_iter()
            .map(|point| {
                let mut params = fixed.clone();
                for (axis, v) in axes.iter().zip(point) {
                    params.insert(axis.name.clone(), v.to_string());
                }
                let gen = args.gen.as_deref().expect("checked");
                match args.numeric {
                    NumericMode::Float => row::<f64>(&run, spec, gen, &params),
                    NumericMode::Rational => row::<testsched::Rational>(&run, spec, gen, &params),
                }
                .map(Some)
            })
            .collect::<Result<_>>()?,
    };

    let mut csv = String::new();
    let mut header: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    if spec.is_some() {
        header.extend(["alg_cost", "opt_cost", "ratio", "stderr", "exact"]);
    }
    if args.curve {
        header.push("curve");
    }
    csv.push_str(&header.join(","));
    csv.push('\n');
    for (point, result) in points.iter().zip(rows) {
        let mut fields: Vec<String> = point.iter().map(f64::to_string).collect();
        if let Some((r, exact)) = result {
            fields.extend([r.alg_cost, r.opt_cost, r.ratio, r.stderr].map(|x| x.to_string()));
            fields.push(exact.to_string());
        }
        if args.curve {
            let p_bar = curve_axis.map(|i| point[i]).or(fixed_p_bar).expect("checked");
            fields.push(fig6_curve(p_bar, thresholds).to_string());
        }
        let _ = writeln!(csv, "{}", fields.join(","));
    }
    emit(args.output.as_deref(), &csv)
}

fn row<T: Time>(
    run: &RunArgs,
    spec: &AlgorithmSpec,
    gen: &str,
    params: &BTreeMap<String, String>,
) -> Result<(RatioReport, bool)> {
    let instance: Instance<T> = generate(gen, params, run.seed).map_err(|e| Usage::new(e.to_string()))?;
    evaluate(run, spec, &instance, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_ranges() {
        let a = parse_axis("p_bar=1.9:2.3:0.05").unwrap();
        assert_eq!(a.values.len(), 9);
        assert_eq!(a.values[2], 2.0);
        assert_eq!(*a.values.last().unwrap(), 2.3);
        assert_eq!(parse_axis("g=0,0.5,1").unwrap().values, vec![0.0, 0.5, 1.0]);
        assert!(parse_axis("p=2:1:0.1").is_err());
        assert!(parse_axis("p=1:2:0").is_err());
        assert!(parse_axis("p=").is_err());
    }

    #[test]
    fn grid_order() {
        let axes = [Axis { name: "a".into(), values: vec![1.0, 2.0] }, Axis { name: "b".into(), values: vec![3.0, 4.0] }];
        assert_eq!(grid(&axes), vec![vec![1.0, 3.0], vec![1.0, 4.0], vec![2.0, 3.0], vec![2.0, 4.0]]);
    }
}
