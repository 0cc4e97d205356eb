//! Analysis of the randomized algorithm and the randomized lower bound.
//!
//! The worst case for Random mixes four job types: type 0 (`p̄ = T`, `p = 0`),
//! type T (`p̄ = p = T`), type E (`p̄ = p = E`) and type E+
//! (`p̄ = p = E + ε`), in fractions `1 − α − β − γ`, `α`, `β`, `γ`.

use serde::{Deserialize, Serialize};

use super::optimize::{bisect, golden_max, NumericError, DEFAULT_TOL};
use crate::analysis::makespan::PHI;

pub const T_PAPER: f64 = 1.7453;
pub const E_PAPER: f64 = 2.8609;
pub const RAND_LB: f64 = 1.62575;

/// The eight left-hand sides that must be nonnegative for Random to be
/// `T`-competitive.
pub fn random_conditions(t: f64, e: f64) -> [f64; 8] {
    [
        e * e * (t - 1.0).powi(2) + t * (2.0 * t - 1.0) - e * t * t,
        -1.0 / (t - 1.0) + 4.0 * (t - 1.0) - e / t,
        t * (t - 1.0) - 0.75 - e / (4.0 * t),
        4.0 * e * (1.0 - (2.0 - t) * t * t) - (2.0 * t * (t - 1.0) - 1.0).powi(2),
        e * (t - 1.0) - 2.0,
        4.0 * t - 5.0 - 1.0 / (t - 1.0),
        4.0 * (t - 1.0) - e * e / (t * (e - 1.0)),
        t - 1.0 - 1.0 / (4.0 * (e * t - e - t)),
    ]
}

/// `E` on which condition 2 vanishes for a given `T`.
pub fn cond2_e(t: f64) -> f64 {
    t * (4.0 * (t - 1.0) - 1.0 / (t - 1.0))
}

/// Intersection of conditions 2 and 4 with `T` above the golden ratio: the
/// smallest `T` (hence ratio) satisfying all eight conditions.
pub fn solve_random_params() -> Result<(f64, f64), NumericError> {
    let (lo, hi) = (1.6f64.max(PHI + 1e-9), 1.9);
    let t = bisect(|t| random_conditions(t, cond2_e(t))[3], lo, hi, 1e-14)?;
    let e = cond2_e(t);
    if !(2.5..=3.2).contains(&e) {
        return Err(NumericError::Domain(format!("E = {e} outside [2.5, 3.2]")));
    }
    Ok((t, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostCoefficients {
    pub alg2: f64,
    pub alg1: f64,
    pub opt2: f64,
    pub opt1: f64,
}

/// `n²/2` and `n/2` coefficients of `E[ALG]` and `OPT` on the four-type
/// instance, `ε → 0`.
pub fn random_costs(alpha: f64, beta: f64, gamma: f64, t: f64, e: f64) -> CostCoefficients {
    let (a, b, g) = (alpha, beta, gamma);
    let s = a + b + g;
    CostCoefficients {
        alg2: 1.0 + g + b * e + b * g * e + g * g * e + a * t + a * g * t,
        alg1: 1.0 - g + b * e + g * e + a * t,
        opt2: 1.0 - s * s + e * (b + g).powi(2) + t * a * a + 2.0 * t * a * (b + g),
        opt1: 1.0 - s + b * e + g * e + a * t,
    }
}

/// `T·OPT₂ − ALG₂`: nonnegative iff the leading-order ratio is at most `T`.
pub fn leading_gap(alpha: f64, beta: f64, gamma: f64, t: f64, e: f64) -> f64 {
    let c = random_costs(alpha, beta, gamma, t, e);
    t * c.opt2 - c.alg2
}

/// Job counts of the four types: `(type 0, type T, type E, type E+)`.
pub fn type_counts(n: usize, alpha: f64, beta: f64, gamma: f64) -> [usize; 4] {
    let floor = |f: f64| (f * n as f64 + 1e-9).floor() as usize;
    let (k_t, k_e, k_p) = (floor(alpha), floor(beta), floor(gamma));
    [n.saturating_sub(k_t + k_e + k_p), k_t, k_e, k_p]
}

/// Exact `E[ALG]` of Random on the four-type instance with the given counts,
/// when every job is tested (`p̄ ≥ T` for all types) and only type E+ is
/// deferred.
pub fn random_alg_exact(counts: [usize; 4], t: f64, e: f64, eps: f64) -> f64 {
    let [k0, kt, ke, kp] = counts.map(|k| k as f64);
    let n = k0 + kt + ke + kp;
    let phase = n + t * kt + e * ke;
    let immediate = k0 + kt + ke;
    (immediate * phase + phase - kp) / 2.0 + kp * phase + (e + eps) * kp * (kp + 1.0) / 2.0
}

/// Optimal cost of jobs grouped by key, groups listed in ascending key.
pub fn block_cost(groups: &[(usize, f64)]) -> f64 {
    let mut clock = 0.0;
    let mut total = 0.0;
    for &(count, key) in groups {
        let c = count as f64;
        total += c * clock + key * c * (c + 1.0) / 2.0;
        clock += c * key;
    }
    total
}

/// Exact `OPT` on the four-type instance.
pub fn random_opt_exact(counts: [usize; 4], t: f64, e: f64, eps: f64) -> f64 {
    let [k0, kt, ke, kp] = counts;
    block_cost(&[(k0, 1.0), (kt, t), (ke, e), (kp, e + eps)])
}

/// Interior critical point of [`leading_gap`] with all three fractions free.
pub fn case1_point(t: f64, e: f64) -> (f64, f64, f64) {
    let gamma = (e * (t - 1.0) - t) * (2.0 * t - 1.0) / (e * (t - 1.0) + t);
    let beta = (1.0 + gamma - 2.0 * gamma * t) / (2.0 * t);
    let alpha = -beta - gamma + (1.0 + gamma) / (2.0 * (t - 1.0));
    (alpha, beta, gamma)
}

/// `(1/q) / (1/q + 3q − 2 − q²)`.
pub fn rand_lb_value(q: f64) -> Result<f64, NumericError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(NumericError::Domain(format!("q must lie in (0, 1), got {q}")));
    }
    Ok((1.0 / q) / (1.0 / q + 3.0 * q - 2.0 - q * q))
}

pub fn rand_lb_q_star() -> f64 {
    1.0 - 1.0 / 3f64.sqrt()
}

/// Maximizes [`rand_lb_value`] over `q`, returning `(q, value)`.
pub fn rand_lb_maximize() -> (f64, f64) {
    golden_max(|q| rand_lb_value(q).unwrap_or(f64::NEG_INFINITY), 1e-6, 1.0 - 1e-6, DEFAULT_TOL * 1e-2)
}

/// Leading term of `E[OPT]` on the lower-bound distribution.
pub fn rand_lb_expected_opt(n: usize, q: f64) -> f64 {
    let n = n as f64;
    n * n / 2.0 * (1.0 / q + 3.0 * q - 2.0 - q * q)
}

/// Lower bound on `E[ALG]` for any algorithm on that distribution.
pub fn rand_lb_alg_bound(n: usize, q: f64) -> f64 {
    let n = n as f64;
    n * n / (2.0 * q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn conditions_at_reference_point() {
        let c = random_conditions(T_PAPER, E_PAPER);
        let expected = [0.178736, 0.000256, 0.140971, 0.000316, 0.132229, 0.639458, 0.461132, 0.099186];
        for (i, (x, y)) in c.iter().zip(expected).enumerate() {
            assert!(close(*x, y, 1e-6), "condition {}: {x} vs {y}", i + 1);
        }
        assert!(c[1].abs() < 1e-3 && c[3].abs() < 1e-3);
    }

    #[test]
    fn conditions_elsewhere() {
        let c = random_conditions(2.0, 3.0);
        assert_eq!(c, [3.0, 1.5, 0.875, 3.0, 1.0, 2.0, 1.75, 0.75]);
        assert!(c.iter().all(|x| *x > 0.0));
        let c = random_conditions(1.1, 5.0);
        assert!(close(c[2], -1.776364, 1e-5), "{}", c[2]);
    }

    #[test]
    fn solved_parameters() {
        let (t, e) = solve_random_params().unwrap();
        assert!(close(t, 1.74526283, 1e-7) && close(e, 2.86090957, 1e-7), "{t} {e}");
        assert!(close(t, T_PAPER, 1e-3) && close(e, E_PAPER, 1e-3));
        assert!(t > PHI);
        assert!(random_conditions(t, e).iter().all(|c| *c >= -1e-9));
    }

    #[test]
    fn coefficient_corners() {
        let c = random_costs(0.0, 0.0, 0.0, T_PAPER, E_PAPER);
        assert_eq!((c.alg2, c.opt2), (1.0, 1.0));
        let c = random_costs(1.0, 0.0, 0.0, T_PAPER, E_PAPER);
        assert!(close(c.alg2, 1.0 + T_PAPER, 1e-12) && close(c.opt2, T_PAPER, 1e-12));
        let gap = leading_gap(1.0, 0.0, 0.0, T_PAPER, E_PAPER);
        assert!(close(gap, T_PAPER * T_PAPER - T_PAPER - 1.0, 1e-12) && gap > 0.0);
    }

    #[test]
    fn case1_is_a_critical_point() {
        let (t, e) = (T_PAPER, E_PAPER);
        let (a, b, g) = case1_point(t, e);
        assert!(close(a, 0.47992, 1e-5) && close(b, 0.10915, 1e-5) && close(g, 0.24853, 1e-5));
        assert!(a > 0.0 && b > 0.0 && g > 0.0 && a + b + g <= 1.0);
        let h = 1e-6;
        let grad = [
            (leading_gap(a + h, b, g, t, e) - leading_gap(a - h, b, g, t, e)) / (2.0 * h),
            (leading_gap(a, b + h, g, t, e) - leading_gap(a, b - h, g, t, e)) / (2.0 * h),
            (leading_gap(a, b, g + h, t, e) - leading_gap(a, b, g - h, t, e)) / (2.0 * h),
        ];
        assert!(grad.iter().all(|d| d.abs() < 1e-6), "{grad:?}");
        let value = leading_gap(a, b, g, t, e);
        let cond1 = random_conditions(t, e)[0];
        assert!(close(value, cond1 / (e * (t - 1.0) + t), 1e-9));
        assert!(close(value, 0.046095, 1e-5));
    }

    #[test]
    fn exact_costs_match_coefficients_to_leading_order() {
        let (a, b, g) = (0.2, 0.3, 0.1);
        let n = 100_000;
        let counts = type_counts(n, a, b, g);
        let c = random_costs(a, b, g, T_PAPER, E_PAPER);
        let nf = n as f64;
        let alg = random_alg_exact(counts, T_PAPER, E_PAPER, 0.0);
        let opt = random_opt_exact(counts, T_PAPER, E_PAPER, 0.0);
        assert!(close(alg, nf * nf / 2.0 * c.alg2 + nf / 2.0 * c.alg1, 1e-6 * alg));
        assert!(close(opt, nf * nf / 2.0 * c.opt2 + nf / 2.0 * c.opt1, 1e-6 * opt));
    }

    #[test]
    fn lower_bound() {
        let q = rand_lb_q_star();
        assert!(close(q, 0.4226497, 1e-7));
        assert!(close(rand_lb_value(q).unwrap(), 1.62575, 1e-5));
        assert!(close(rand_lb_value(q).unwrap(), 1.6257523846, 1e-9));
        let (qm, vm) = rand_lb_maximize();
        assert!(close(qm, q, 1e-6), "{qm}");
        assert!(close(vm, 1.6257523846, 1e-9));
        assert!(close(rand_lb_value(1e-9).unwrap(), 1.0, 1e-6));
        assert!(rand_lb_value(0.0).is_err());
    }
}
