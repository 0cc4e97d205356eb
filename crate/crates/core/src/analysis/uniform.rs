//! Competitive ratios for instances where every job has the same upper
//! limit `p̄`.

use serde::{Deserialize, Serialize};

use super::optimize::{bisect, grid2_max, NumericError};
use crate::algorithms::CombinedThresholds;

/// `(1 + √(3 + 2√5)) / 2`, the ratio UTE guarantees on extreme instances.
pub const UTE_RHO: f64 = 1.866_760_399_173_862_1;
pub const UTE_BETA_STAR: f64 = 0.286_960_976_367_905_8;
pub const UTE_P_STAR: f64 = 2.796_077_497_299_552_3;

/// Asymptotic ratio of Beat for `p̄ ∈ [1.5, 3]`.
pub fn beat_ratio(p_bar: f64) -> Result<f64, NumericError> {
    if !(1.5..=3.0).contains(&p_bar) {
        return Err(NumericError::Domain(format!("beat_ratio needs p̄ ∈ [1.5, 3], got {p_bar}")));
    }
    Ok(beat_ratio_unchecked(p_bar))
}

fn beat_ratio_unchecked(p: f64) -> f64 {
    (1.0 + 2.0 * (p - 2.0) * p + ((1.0 - 2.0 * p).powi(2) * (4.0 * p - 3.0)).sqrt()) / (2.0 * (p - 1.0) * p)
}

/// Beat's ratio bound on an instance with short fraction `σ = α·λ` of which
/// a fraction `δ` has `p = E`.
pub fn beat_ratio_alpha_delta(p_bar: f64, alpha: f64, delta: f64) -> f64 {
    let p = p_bar;
    let e = (p - 1.0).max(1.0);
    let num = p + 2.0 - 1.0 / p
        + alpha * alpha * ((1.0 + e) * (2.0 * delta - delta * delta) + (1.0 - delta).powi(2))
        + 2.0 * alpha * (2.0 + (1.0 - 1.0 / p) * (1.0 + e * delta));
    let den = p + alpha * alpha * ((p - 1.0) * delta * delta + 1.0) + 2.0 * alpha * (1.0 + (p - 1.0) * delta);
    num / den
}

/// Maximum of [`beat_ratio_alpha_delta`] over `α ∈ [0, alpha_max]`, `δ ∈ [0, 1]`.
pub fn beat_ratio_search(p_bar: f64, alpha_max: f64) -> ((f64, f64), f64) {
    grid2_max(|a, d| beat_ratio_alpha_delta(p_bar, a, d), (0.0, alpha_max), (0.0, 1.0), 200, 1e-10)
}

/// Asymptotic ratio of Threshold for `p̄ > 2`.
pub fn thresh_uniform_ratio(p_bar: f64) -> Result<f64, NumericError> {
    if p_bar <= 2.0 {
        return Err(NumericError::Domain(format!("thresh_uniform_ratio needs p̄ > 2, got {p_bar}")));
    }
    if p_bar >= 3.0 {
        return Ok(3f64.sqrt());
    }
    Ok(thresh_small(p_bar))
}

fn thresh_small(p: f64) -> f64 {
    (-3.0 + p + (-15.0 + p * (18.0 + p)).sqrt()) / (2.0 * (p - 1.0))
}

/// Threshold's ratio on `αn` jobs with `p = 0`, `βn` with `p = 2` and
/// `γn = (1 − α − β)n` with `p = p̄`, all with upper limit `p̄ > 2`.
pub fn thresh_uniform_fraction_ratio(p_bar: f64, alpha: f64, beta: f64) -> f64 {
    let (a, b, g, p) = (alpha, beta, 1.0 - alpha - beta, p_bar);
    let alg = g * (a + b + g) + 1.5 * b * b + 3.0 * b * (a + g) + 0.5 * a * a + a * g + 0.5 * g * g * p;
    let opt = if p > 3.0 {
        0.5 * a * a + a * (b + g) + 1.5 * b * b + 3.0 * b * g + 0.5 * g * g * p
    } else {
        0.5 * a * a + a * (b + g) + p * b * b / 2.0 + p * b * g + p * g * g / 2.0
    };
    alg / opt
}

/// Maximum of [`thresh_uniform_fraction_ratio`] over the simplex.
pub fn thresh_uniform_search(p_bar: f64) -> ((f64, f64), f64) {
    // β = s(1 − α) maps the unit square onto the simplex.
    let ((a, s), v) =
        grid2_max(|a, s| thresh_uniform_fraction_ratio(p_bar, a, s * (1.0 - a)), (0.0, 1.0), (0.0, 1.0), 200, 1e-10);
    ((a, s * (1.0 - a)), v)
}

/// `T1`: fixpoint of the Beat ratio. `T2`: where it crosses the Threshold ratio.
pub fn solve_thresholds() -> Result<CombinedThresholds, NumericError> {
    let t1 = bisect(|x| beat_ratio_unchecked(x) - x, 1.8, 2.0, 1e-13)?;
    let t2 = bisect(|x| beat_ratio_unchecked(x) - thresh_small(x), 2.0 + 1e-9, 2.5, 1e-13)?;
    Ok(CombinedThresholds { t1, t2 })
}

/// Fraction of jobs UTE executes right after their test.
pub fn ute_beta(rho: f64, p_bar: f64) -> f64 {
    let (p, r) = (p_bar, rho);
    (1.0 - p + p * p - r + 2.0 * p * r - p * p * r) / (1.0 - p + p * p - r + p * r)
}

/// Upper limit from which UTE's immediate-execution prefix is empty.
pub fn ute_p_star(rho: f64) -> f64 {
    (2.0 * rho + (4.0 * rho - 3.0).sqrt() - 1.0) / (2.0 * (rho - 1.0))
}

/// UTE's ratio at upper limit `p̄` for `ρ ≤ p̄ ≤ p*(ρ)`.
pub fn ute_ratio(p_bar: f64, rho: f64) -> Result<f64, NumericError> {
    let slack = 1e-9;
    if p_bar < rho - slack || p_bar > ute_p_star(rho) + slack {
        return Err(NumericError::Domain(format!(
            "ute_ratio needs ρ ≤ p̄ ≤ p*(ρ) = {}, got p̄ = {p_bar}",
            ute_p_star(rho)
        )));
    }
    Ok(ute_ratio_formula(p_bar))
}

pub(crate) fn ute_ratio_formula(p: f64) -> f64 {
    let disc = -3.0 + 6.0 * p - 3.0 * p.powi(2) - 6.0 * p.powi(3) + 10.0 * p.powi(4) - 4.0 * p.powi(5) + p.powi(6);
    (-1.0 - p + 2.0 * p * p - p.powi(3) + disc.sqrt()) / (2.0 * (p - 1.0))
}

/// The self-consistent `ρ` with `ute_ratio(ρ) = ρ`.
pub fn ute_fixpoint() -> Result<f64, NumericError> {
    bisect(|x| ute_ratio_formula(x) - x, 1.7, 2.0, 1e-14)
}

/// Piecewise ratio of the combined algorithm as a function of `p̄`.
pub fn fig6_curve(p_bar: f64, thresholds: CombinedThresholds) -> f64 {
    if p_bar <= 1.0 {
        1.0
    } else if p_bar < thresholds.t1 {
        p_bar
    } else if p_bar <= thresholds.t2 {
        beat_ratio_unchecked(p_bar)
    } else if p_bar < 3.0 {
        thresh_small(p_bar)
    } else {
        3f64.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p_bar: f64,
    pub ratio: f64,
}

/// [`fig6_curve`] sampled on `[from, to]` with `points` points.
pub fn fig6_samples(from: f64, to: f64, points: usize, thresholds: CombinedThresholds) -> Vec<CurvePoint> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let p_bar = from + (to - from) * i as f64 / (points - 1) as f64;
            CurvePoint { p_bar, ratio: fig6_curve(p_bar, thresholds) }
        })
        .collect()
}

/// Supremum of [`fig6_curve`] and where it is approached.
pub fn fig6_max(thresholds: CombinedThresholds) -> (f64, f64) {
    let candidates = [
        (thresholds.t1, thresholds.t1),
        (thresholds.t1, beat_ratio_unchecked(thresholds.t1)),
        (thresholds.t2, beat_ratio_unchecked(thresholds.t2)),
        (3.0, 3f64.sqrt()),
    ];
    let mut best = candidates[0];
    for c in candidates {
        if c.1 > best.1 {
            best = c;
        }
    }
    for s in fig6_samples(0.5, 5.0, 4501, thresholds) {
        if s.ratio > best.1 {
            best = (s.p_bar, s.ratio);
        }
    }
    best
}
