use std::process::{Command, Output};

fn testsched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testsched")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn simulate_threshold_family() {
    let out = testsched(&["simulate", "--alg", "threshold", "--gen", "threshold_worstcase", "a=1", "b=1", "c=1", "epsilon=0", "--numeric", "rational"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["alg_cost"], 16.0);
    assert_eq!(r["opt_cost"], 9.0);
}

#[test]
fn simulate_one_job_makespan() {
    let out = testsched(&["simulate", "--alg", "makespan_det", "--job", "2,2", "--objective", "makespan"]);
    assert_eq!(json(&out)["ratio"], 1.5);
}

#[test]
fn exact_mode_has_zero_stderr() {
    let out = testsched(&[
        "simulate", "--alg", "random", "--gen", "four_type", "n=6", "alpha=0.25", "beta=0.25", "gamma=0.25", "--exact", "--seed", "5",
    ]);
    let r = json(&out);
    assert_eq!(r["stderr"], 0.0);
    assert_eq!(r["exact"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(testsched(&["simulate", "--alg", "random", "--job", "2,0"]).status.code(), Some(2));
    assert_eq!(testsched(&["simulate", "--alg", "nope", "--job", "2,0"]).status.code(), Some(2));
    assert_eq!(testsched(&["simulate", "--alg", "beat", "--job", "2,0", "--job", "3,0"]).status.code(), Some(2));
    assert_eq!(testsched(&["simulate", "--alg", "threshold", "--job", "2,3"]).status.code(), Some(2));
    assert_eq!(testsched(&["simulate", "--alg", "threshold", "--job", "3,2"]).status.code(), Some(0));
    assert_eq!(
        testsched(&["sweep", "--alg", "threshold", "--gen", "single", "proc=0", "--axis", "upper=3:2:0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(testsched(&["bogus"]).status.code(), Some(2));
}

#[test]
fn sweep_is_ordered_and_stable() {
    let args = ["sweep", "--alg", "random", "--gen", "extreme_uniform", "n=50", "p_bar=2", "--axis", "gamma=0:1:0.25", "--seed", "9", "--trials", "20"];
    let a = testsched(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "gamma,alg_cost,opt_cost,ratio,stderr,exact");
    let gammas: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(gammas, ["0", "0.25", "0.5", "0.75", "1"]);
    let one_worker = Command::new(env!("CARGO_BIN_EXE_testsched")).args(args).env("TESTSCHED_WORKERS", "1").output().unwrap();
    assert_eq!(one_worker.stdout, a.stdout);
}

#[test]
fn curve_only_sweep() {
    let out = testsched(&["sweep", "--curve", "--axis", "p_bar=0.5:5:0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p_bar,curve\n0.5,1\n"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn verify_constants_and_mutation() {
    let out = testsched(&["verify-constants"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["all_pass"], true);
    assert!((r["q_star"].as_f64().unwrap() - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-12);
    let bad = testsched(&["verify-constants", "--perturb", "rand_lb=-0.01"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["failed"], serde_json::json!(["rand_lb"]));
}

#[test]
fn det_lower_bound_degenerate_delta() {
    let out = testsched(&["lower-bound", "det", "--n", "200", "--delta", "0", "--p-bar", "2.5", "--alg", "threshold", "--alg", "delay_all"]);
    let rows = json(&out)["rows"].clone();
    // every job gets p = 0: Threshold runs each right after its test
    assert!((rows[0]["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // DelayAll holds every zero job back until all tests are done
    assert!((rows[1]["ratio"].as_f64().unwrap() - 400.0 / 201.0).abs() < 1e-12);
}

#[test]
fn rand_lower_bound_needs_seed() {
    assert_eq!(testsched(&["lower-bound", "rand", "--n", "10"]).status.code(), Some(2));
}

#[test]
fn gen_simulate_replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let trace = dir.path().join("trace.jsonl");
    let inst_s = inst.to_str().unwrap();
    let trace_s = trace.to_str().unwrap();
    assert!(testsched(&["gen", "random", "n=8", "--seed", "2", "-o", inst_s]).status.success());
    let sim = testsched(&["simulate", "--alg", "delay_all", "--instance", inst_s, "--trace", trace_s]);
    let total = json(&sim)["alg_cost"].as_f64().unwrap();
    let total_s = total.to_string();
    let ok = testsched(&["replay", "--instance", inst_s, "--trace", trace_s, "--expect-total", &total_s]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let wrong = testsched(&["replay", "--instance", inst_s, "--trace", trace_s, "--expect-total", "0.5"]);
    assert_eq!(wrong.status.code(), Some(1));
}
