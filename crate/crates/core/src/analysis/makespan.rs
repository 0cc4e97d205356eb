//! Makespan ratios.

use super::optimize::{bisect, golden_max, NumericError, DEFAULT_TOL};

/// The golden ratio `(1 + √5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_894_8;

/// Ratio of the deterministic rule at upper limit `p̄`, worst `p`.
pub fn det_ratio_at(p_bar: f64) -> f64 {
    if p_bar > PHI {
        (1.0 + p_bar) / p_bar
    } else {
        p_bar.max(1.0)
    }
}

/// Ratio of the randomized rule at upper limit `p̄`, worst `p`.
pub fn rand_ratio_at(p_bar: f64) -> f64 {
    if p_bar <= 1.0 {
        1.0
    } else {
        p_bar * p_bar / (p_bar * p_bar - p_bar + 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MakespanRatios {
    pub det: f64,
    pub rand: f64,
    pub rand_lb: f64,
}

/// `φ` as the root of `(1 + x)/x = x`, the maximum of the randomized ratio
/// over `p̄`, and the matching lower bound.
pub fn makespan_ratios() -> Result<MakespanRatios, NumericError> {
    let det = bisect(|x| (1.0 + x) / x - x, 1.0, 2.0, 1e-15)?;
    let (_, rand) = golden_max(rand_ratio_at, 1.0, 10.0, DEFAULT_TOL);
    Ok(MakespanRatios { det, rand, rand_lb: 4.0 / 3.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let r = makespan_ratios().unwrap();
        assert!((r.det - PHI).abs() < 1e-9);
        assert!((r.rand - 4.0 / 3.0).abs() < 1e-12);
        assert!(((1.0 + PHI) / PHI - PHI).abs() < 1e-15);
        assert_eq!(rand_ratio_at(2.0), 4.0 / 3.0);
    }

    #[test]
    fn grid_maximum_at_two() {
        let best = (0..=4000)
            .map(|i| 1.0 + i as f64 / 1000.0)
            .max_by(|a, b| rand_ratio_at(*a).total_cmp(&rand_ratio_at(*b)))
            .unwrap();
        assert!((best - 2.0).abs() < 1e-9);
        for i in 0..=4000 {
            assert!(det_ratio_at(i as f64 / 1000.0) <= PHI + 1e-12);
        }
    }
}
