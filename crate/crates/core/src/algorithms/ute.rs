use serde::{Deserialize, Serialize};

use super::threshold::all_untested;
use super::{plan_algorithm, uniform_limit, Plan};
use crate::analysis::uniform::{ute_beta, ute_p_star, UTE_RHO};
use crate::engine::EngineError;
use crate::num::Time;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UteParams {
    pub rho: f64,
}

impl UteParams {
    /// Fraction of tested jobs executed at once regardless of `p`.
    pub fn beta(&self, p_bar: f64) -> f64 {
        ute_beta(self.rho, p_bar)
    }

    pub fn p_star(&self) -> f64 {
        ute_p_star(self.rho)
    }
}

impl Default for UteParams {
    fn default() -> Self {
        UteParams { rho: UTE_RHO }
    }
}

/// For uniform upper limits. No tests if `p̄ ≤ ρ`; otherwise tests every job
/// in id order, executes the first `⌈max{0, β}·n⌉` at once, and of the rest
/// executes only zero-time jobs at once.
pub struct Ute<T> {
    params: UteParams,
    plan: Option<Plan<T>>,
}

impl<T: Time> Ute<T> {
    pub fn new(params: UteParams) -> Self {
        Ute { params, plan: None }
    }

    /// Number of tested jobs executed immediately regardless of `p`.
    pub fn prefix_len(&self, n: usize, p_bar: f64) -> usize {
        let beta = self.params.beta(p_bar).max(0.0);
        ((beta * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
    }

    fn label(&self) -> String {
        format!("ute[rho={}]", self.params.rho)
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let Some(p_bar) = uniform_limit(upper, "ute")? else {
            return Ok(all_untested(upper));
        };
        if p_bar <= T::from_f64(self.params.rho) {
            return Ok(all_untested(upper));
        }
        let prefix = self.prefix_len(upper.len(), p_bar.to_f64());
        Ok(Plan::new(
            Vec::new(),
            (0..upper.len()).collect(),
            Box::new(move |rank, p: &T| rank < prefix || p.is_zero()),
        ))
    }
}

plan_algorithm!(Ute);

/// The explicit two-parameter schedule used against the deterministic
/// adversary: the first `⌊νn⌋` jobs (by id) run untested, the rest are tested
/// in id order; the first `⌊λn⌋` tested jobs execute at once, the others at
/// once only if `p = 0`.
pub struct ScheduleFamily<T> {
    nu: f64,
    lambda: f64,
    plan: Option<Plan<T>>,
}

impl<T: Time> ScheduleFamily<T> {
    pub fn new(nu: f64, lambda: f64) -> Self {
        ScheduleFamily { nu, lambda, plan: None }
    }

    fn label(&self) -> String {
        format!("family[nu={},lambda={}]", self.nu, self.lambda)
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let n = upper.len();
        let count = |f: f64| ((f * n as f64 + 1e-9).floor().max(0.0) as usize).min(n);
        let untested = count(self.nu);
        let immediate = count(self.lambda);
        Ok(Plan::new(
            (0..untested).collect(),
            (untested..n).collect(),
            Box::new(move |rank, p: &T| rank < immediate || p.is_zero()),
        ))
    }
}

plan_algorithm!(ScheduleFamily);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;
    use crate::model::{Action, Instance};

    #[test]
    fn small_limit_runs_untested() {
        let inst = Instance::from_pairs((0..5).map(|_| (1.8, 0.0)));
        let trace = simulate(&mut Ute::new(UteParams::default()), &inst).unwrap();
        assert!(trace.actions().all(|a| matches!(a, Action::ExecuteUntested(_))));
    }

    #[test]
    fn no_prefix_above_p_star() {
        let ute = Ute::<f64>::new(UteParams::default());
        assert_eq!(ute.prefix_len(1000, 2.8), 0);
        assert_eq!(ute.prefix_len(1000, 3.5), 0);
        assert!(ute.prefix_len(1000, 2.0) > 0);
    }

    #[test]
    fn prefix_runs_long_jobs_immediately() {
        // p̄ = 2: β(ρ*, 2) > 0, so the first tested long jobs are not deferred.
        let n = 20;
        let inst = Instance::from_pairs((0..n).map(|_| (2.0, 2.0)));
        let mut ute = Ute::new(UteParams::default());
        let k = ute.prefix_len(n, 2.0);
        let trace = simulate(&mut ute, &inst).unwrap();
        let actions: Vec<_> = trace.actions().collect();
        for j in 0..k {
            assert_eq!(actions[2 * j], Action::Test(j));
            assert_eq!(actions[2 * j + 1], Action::ExecuteTested(j));
        }
        assert_eq!(actions[2 * k], Action::Test(k));
        assert_eq!(actions[2 * k + 1], Action::Test(k + 1));
    }

    #[test]
    fn family_counts() {
        let inst = Instance::from_pairs((0..10).map(|_| (2.0, 2.0)));
        let trace = simulate(&mut ScheduleFamily::new(0.3, 0.2), &inst).unwrap();
        let actions: Vec<_> = trace.actions().collect();
        assert_eq!(&actions[..3], &[Action::ExecuteUntested(0), Action::ExecuteUntested(1), Action::ExecuteUntested(2)]);
        assert_eq!(&actions[3..7], &[Action::Test(3), Action::ExecuteTested(3), Action::Test(4), Action::ExecuteTested(4)]);
        assert_eq!(actions[7], Action::Test(5));
        assert_eq!(actions[8], Action::Test(6));
    }
}
