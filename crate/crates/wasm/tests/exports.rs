use serde_json::Value;
use testsched_wasm::{curve_json, simulate_json, surface_json};

#[test]
fn curve_peaks_at_first_threshold() {
    let v: Value = serde_json::from_str(&curve_json(0.5, 5.0, 91).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 91);
    assert!((v["max_ratio"].as_f64().unwrap() - v["t1"].as_f64().unwrap()).abs() < 1e-9);
    assert_eq!(v["points"][0]["ratio"], 1.0);
    assert!(curve_json(2.0, 1.0, 10).is_err());
}

#[test]
fn simulate_reports_both_schedules() {
    let jobs = r#"[{"upper": 2, "proc": 2}, {"upper": 2, "proc": 2}, {"upper": 2, "proc": 0}]"#;
    let v: Value = serde_json::from_str(&simulate_json("threshold", jobs, 0).unwrap()).unwrap();
    assert_eq!(v["alg_cost"], 16.0);
    assert_eq!(v["opt_cost"], 9.0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    assert_eq!(v["steps"][0]["kind"], "test");
    assert_eq!(v["opt_steps"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_rejects_bad_input() {
    assert!(simulate_json("nope", "[]", 0).is_err());
    assert!(simulate_json("threshold", "[{\"upper\": 1, \"proc\": 2}]", 0).is_err());
    assert!(simulate_json("threshold", "not json", 0).is_err());
}

#[test]
fn surface_contains_the_bound() {
    let v: Value = serde_json::from_str(&surface_json((0.55, 0.7), (1.9, 2.1), 31, 41).unwrap()).unwrap();
    let best = v["best_value"].as_f64().unwrap();
    assert!(best <= 1.8546282 && best > 1.854, "{best}");
    assert_eq!(v["values"].as_array().unwrap().len(), 41);
    assert!(surface_json((0.5, 0.4), (2.0, 3.0), 10, 10).is_err());
}
