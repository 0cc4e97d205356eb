//! The adaptive lower bound for deterministic algorithms.
//!
//! Against the adversary with fraction `δ` and upper limit `p̄`, an algorithm
//! is summarized by the fraction `ν` of jobs it runs untested before testing
//! and the fraction `λ` of tested long jobs it executes right after their
//! test. Costs are `n²` coefficients.

use serde::{Deserialize, Serialize};

use super::optimize::{golden_max, grid2_max, grid_golden_min, NumericError, DEFAULT_TOL};

/// Adversary parameters at which the bound is attained.
pub const DELTA_STAR: f64 = 0.6306655;
pub const P_BAR_STAR: f64 = 1.9896202;
/// Value of the bound.
pub const DET_LB: f64 = 1.854628;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetLbPoint {
    pub nu: f64,
    pub lambda: f64,
    pub delta: f64,
    pub p_bar: f64,
}

impl DetLbPoint {
    pub fn validate(&self) -> Result<(), NumericError> {
        let slack = 1e-12;
        let ok = self.nu >= 0.0
            && self.lambda >= 0.0
            && self.nu + self.lambda <= self.delta + slack
            && self.delta <= 1.0
            && self.p_bar > 1.0;
        if ok {
            Ok(())
        } else {
            Err(NumericError::Domain(format!("invalid point {self:?} (need ν, λ ≥ 0, ν + λ ≤ δ ≤ 1, p̄ > 1)")))
        }
    }
}

/// Algorithm cost coefficient; errors outside the valid region.
pub fn det_lb_alg(point: DetLbPoint) -> Result<f64, NumericError> {
    point.validate()?;
    Ok(alg(point.nu, point.lambda, point.delta, point.p_bar))
}

pub(crate) fn alg(nu: f64, lambda: f64, delta: f64, p: f64) -> f64 {
    0.5 * (1.0 + 2.0 * delta * (1.0 - nu * p) + delta * delta * (p - 1.0) + 2.0 * nu * (nu + p - 2.0)
        + lambda * lambda
        + 2.0 * lambda * (nu + p - 1.0 - delta * p))
}

/// Optimal cost coefficient on the realized instance.
pub fn det_lb_opt(nu: f64, delta: f64, p_bar: f64) -> f64 {
    0.5 * (1.0 + (delta - nu).powi(2) * (p_bar - 1.0))
}

/// `1 + δp̄ − p̄`: the best `λ` when `ν = 0`.
pub fn tau(delta: f64, p_bar: f64) -> f64 {
    1.0 + delta * p_bar - p_bar
}

/// Ratio with the cost-minimizing `λ = max{0, τ − ν}`.
pub fn inner_ratio(nu: f64, delta: f64, p_bar: f64) -> f64 {
    let lambda = (tau(delta, p_bar) - nu).max(0.0);
    alg(nu, lambda, delta, p_bar) / det_lb_opt(nu, delta, p_bar)
}

/// Case `ν ≤ τ`, `λ = τ − ν`.
pub fn case_f(nu: f64, delta: f64, p_bar: f64) -> f64 {
    alg(nu, tau(delta, p_bar) - nu, delta, p_bar) / det_lb_opt(nu, delta, p_bar)
}

/// Case `ν ≥ τ`, `λ = 0`.
pub fn case_g(nu: f64, delta: f64, p_bar: f64) -> f64 {
    alg(nu, 0.0, delta, p_bar) / det_lb_opt(nu, delta, p_bar)
}

/// The best response `(ν, λ)` and its ratio.
pub fn best_response(delta: f64, p_bar: f64) -> (f64, f64, f64) {
    let candidates = [0.0, delta, tau(delta, p_bar).clamp(0.0, delta)];
    let (mut nu, mut value) = grid_golden_min(|nu| inner_ratio(nu, delta, p_bar), 0.0, delta, 400, DEFAULT_TOL);
    for c in candidates {
        let v = inner_ratio(c, delta, p_bar);
        if v < value {
            nu = c;
            value = v;
        }
    }
    (nu, (tau(delta, p_bar) - nu).max(0.0), value)
}

/// `R(δ, p̄)`: the ratio the adversary forces on the best algorithm.
pub fn det_lb_value(delta: f64, p_bar: f64) -> Result<f64, NumericError> {
    if !(0.0..=1.0).contains(&delta) || p_bar <= 1.0 {
        return Err(NumericError::Domain(format!("need δ ∈ [0, 1] and p̄ > 1, got δ = {delta}, p̄ = {p_bar}")));
    }
    Ok(best_response(delta, p_bar).2)
}

/// Same minimum by a plain grid over `(ν, λ)`, as an independent check.
pub fn det_lb_value_grid(delta: f64, p_bar: f64, grid: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=grid {
        let nu = delta * i as f64 / grid as f64;
        for j in 0..=grid {
            let lambda = (delta - nu) * j as f64 / grid as f64;
            best = best.min(alg(nu, lambda, delta, p_bar) / det_lb_opt(nu, delta, p_bar));
        }
    }
    best
}

/// Maximizes `R` over `(δ, p̄)`, returning `((δ, p̄), R)`.
pub fn maximize(delta_range: (f64, f64), p_bar_range: (f64, f64), grid: usize) -> ((f64, f64), f64) {
    grid2_max(|d, p| best_response(d, p).2, delta_range, p_bar_range, grid, 1e-8)
}

/// `max_ν f(ν)` over `[0, τ]`, the interior maximum of the first case.
pub fn case_f_max(delta: f64, p_bar: f64) -> (f64, f64) {
    golden_max(|nu| case_f(nu, delta, p_bar), 0.0, tau(delta, p_bar), DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_at_the_optimum() {
        let t = tau(DELTA_STAR, P_BAR_STAR);
        assert!((t - 0.265165).abs() < 1e-6);
        let a = det_lb_alg(DetLbPoint { nu: 0.0, lambda: t, delta: DELTA_STAR, p_bar: P_BAR_STAR }).unwrap();
        assert!((a - 1.2923146).abs() < 1e-6, "{a}");
        assert!((det_lb_opt(0.0, DELTA_STAR, P_BAR_STAR) - 0.6968053).abs() < 1e-6);
    }

    #[test]
    fn trivial_points() {
        let a = det_lb_alg(DetLbPoint { nu: 0.0, lambda: 0.0, delta: 0.0, p_bar: 3.0 }).unwrap();
        assert_eq!(a, 0.5);
        assert_eq!(det_lb_opt(0.4, 0.4, 2.0), 0.5);
        assert!(det_lb_alg(DetLbPoint { nu: 0.5, lambda: 0.5, delta: 0.6, p_bar: 2.0 }).is_err());
    }

    #[test]
    fn value_and_cases() {
        let r = det_lb_value(DELTA_STAR, P_BAR_STAR).unwrap();
        assert!((r - 1.854628).abs() < 1e-5, "{r}");
        assert!((r - 1.8546281092).abs() < 1e-8, "{r}");
        let t = tau(DELTA_STAR, P_BAR_STAR);
        let f0 = case_f(0.0, DELTA_STAR, P_BAR_STAR);
        let ft = case_f(t, DELTA_STAR, P_BAR_STAR);
        let gd = case_g(DELTA_STAR, DELTA_STAR, P_BAR_STAR);
        assert!((f0 - 1.8546281).abs() < 1e-6);
        assert!((ft - 1.8765274).abs() < 1e-6);
        assert!(ft > f0);
        assert!((gd - 1.8546281).abs() < 1e-6);
        let (arg, _) = case_f_max(DELTA_STAR, P_BAR_STAR);
        assert!((arg - 0.201267).abs() < 1e-5, "{arg}");
    }

    #[test]
    fn grid_agrees_with_case_split() {
        let split = det_lb_value(DELTA_STAR, P_BAR_STAR).unwrap();
        let grid = det_lb_value_grid(DELTA_STAR, P_BAR_STAR, 400);
        assert!(grid >= split - 1e-9);
        assert!(grid - split < 1e-4);
    }

    #[test]
    fn perturbation_does_not_increase_the_value() {
        let base = det_lb_value(DELTA_STAR, P_BAR_STAR).unwrap();
        for i in -2..=2 {
            for j in -2..=2 {
                let v = det_lb_value(DELTA_STAR + 0.005 * i as f64, P_BAR_STAR + 0.005 * j as f64).unwrap();
                assert!(v <= base + 1.1e-7, "({i}, {j}): {v} vs {base}");
            }
        }
    }

    #[test]
    fn domain() {
        assert!(det_lb_value(1.5, 2.0).is_err());
        assert!(det_lb_value(0.5, 1.0).is_err());
    }
}
