//! Recomputes the analytic constants and compares each with its reference
//! value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::optimize::{golden_max, NumericError};
use super::{det_lb, makespan, random, uniform};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantCheck {
    pub name: String,
    pub paper_value: f64,
    pub computed_value: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Reference values: `(name, value, tolerance)`.
pub const REFERENCE: &[(&str, f64, f64)] = &[
    ("threshold_ratio", 2.0, 1e-6),
    ("det_lb", 1.854628, 1e-5),
    ("random_T", 1.7453, 1e-3),
    ("random_E", 2.8609, 1e-3),
    ("random_ratio", 1.7453, 1e-3),
    ("rand_lb", 1.62575, 1e-5),
    ("rand_lb_q", 0.42265, 1e-5),
    ("combined_T1", 1.9338, 1e-4),
    ("combined_T2", 2.2948, 1e-4),
    ("combined_ratio", 1.9338, 1e-4),
    ("threshold_uniform_limit", 1.732_050_8, 1e-6),
    ("ute_rho", 1.8668, 1e-4),
    ("ute_instance_ratio", 1.8552, 1e-4),
    ("ute_beta_star", 0.2869, 1e-4),
    ("ute_p_star", 2.7961, 1e-4),
    ("makespan_phi", 1.618, 1e-3),
    ("makespan_rand", 4.0 / 3.0, 1e-9),
    ("makespan_rand_lb", 4.0 / 3.0, 1e-9),
];

/// Computed value of every constant in [`REFERENCE`], in the same order.
pub fn computed_constants() -> Result<Vec<(&'static str, f64)>, NumericError> {
    let (t, e) = random::solve_random_params()?;
    let thresholds = uniform::solve_thresholds()?;
    let (q, rand_lb) = random::rand_lb_maximize();
    let rho = uniform::ute_fixpoint()?;
    let m = makespan::makespan_ratios()?;
    // Threshold on one job with p = 0 and p̄ < 2 has ratio p̄.
    let (_, threshold_sup) = golden_max(|u| u / u.min(1.0), 1.0, 2.0 - 1e-12, 1e-12);
    Ok(vec![
        ("threshold_ratio", threshold_sup),
        ("det_lb", det_lb::det_lb_value(det_lb::DELTA_STAR, det_lb::P_BAR_STAR)?),
        ("random_T", t),
        ("random_E", e),
        ("random_ratio", t),
        ("rand_lb", rand_lb),
        ("rand_lb_q", q),
        ("combined_T1", thresholds.t1),
        ("combined_T2", thresholds.t2),
        ("combined_ratio", uniform::fig6_max(thresholds).1),
        ("threshold_uniform_limit", uniform::thresh_uniform_ratio(3.0)?),
        ("ute_rho", rho),
        ("ute_instance_ratio", uniform::ute_ratio(1.9896, rho)?),
        ("ute_beta_star", uniform::ute_beta(rho, rho)),
        ("ute_p_star", uniform::ute_p_star(rho)),
        ("makespan_phi", m.det),
        ("makespan_rand", m.rand),
        ("makespan_rand_lb", m.rand_lb),
    ])
}

/// Compares computed constants with the references. `overrides` shifts
/// named reference values, for mutation testing.
pub fn verify_constants(overrides: &BTreeMap<String, f64>) -> Result<Vec<ConstantCheck>, VerifyError> {
    if let Some(name) = overrides.keys().find(|k| !REFERENCE.iter().any(|(n, _, _)| n == k)) {
        return Err(VerifyError::UnknownConstant(name.clone()));
    }
    let computed = computed_constants()?;
    Ok(REFERENCE
        .iter()
        .zip(computed)
        .map(|(&(name, value, tolerance), (cname, computed_value))| {
            debug_assert_eq!(name, cname);
            let paper_value = value + overrides.get(name).copied().unwrap_or(0.0);
            let abs_error = (computed_value - paper_value).abs();
            ConstantCheck {
                name: name.to_string(),
                paper_value,
                computed_value,
                abs_error,
                tolerance,
                pass: abs_error <= tolerance,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_constants_verify() {
        let report = verify_constants(&BTreeMap::new()).unwrap();
        assert_eq!(report.len(), REFERENCE.len());
        for c in &report {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn every_perturbation_is_detected() {
        for (name, _, tol) in REFERENCE {
            assert!(*tol < 1e-2);
            for delta in [1e-2, -1e-2] {
                let overrides = BTreeMap::from([(name.to_string(), delta)]);
                let report = verify_constants(&overrides).unwrap();
                let failed: Vec<_> = report.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                assert_eq!(failed, vec![*name]);
            }
        }
    }

    #[test]
    fn unknown_override() {
        let overrides = BTreeMap::from([("nope".to_string(), 1.0)]);
        assert_eq!(verify_constants(&overrides), Err(VerifyError::UnknownConstant("nope".into())));
    }
}
