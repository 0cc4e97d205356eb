use super::{plan_algorithm, preprocess_small_limits, remaining, Plan};
use crate::engine::EngineError;
use crate::num::Time;

/// Runs jobs with `p̄ < 2` untested (ascending `p̄`), tests the rest in id
/// order, executes a tested job at once iff `p ≤ 2`, and runs the deferred
/// jobs last in ascending `p`.
pub struct Threshold<T> {
    plan: Option<Plan<T>>,
}

impl<T: Time> Threshold<T> {
    pub fn new() -> Self {
        Threshold { plan: None }
    }

    fn label(&self) -> String {
        "threshold".into()
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let two = T::from_usize(2);
        let prefix = preprocess_small_limits(upper, &two);
        let tests = remaining(upper.len(), &prefix);
        Ok(Plan::new(prefix, tests, Box::new(move |_, p: &T| *p <= two)))
    }
}

impl<T: Time> Default for Threshold<T> {
    fn default() -> Self {
        Self::new()
    }
}

plan_algorithm!(Threshold);

/// Like [`Threshold`], but defers every tested job.
pub struct DelayAll<T> {
    plan: Option<Plan<T>>,
}

impl<T: Time> DelayAll<T> {
    pub fn new() -> Self {
        DelayAll { plan: None }
    }

    fn label(&self) -> String {
        "delay_all".into()
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let prefix = preprocess_small_limits(upper, &T::from_usize(2));
        let tests = remaining(upper.len(), &prefix);
        Ok(Plan::new(prefix, tests, Box::new(|_, _: &T| false)))
    }
}

impl<T: Time> Default for DelayAll<T> {
    fn default() -> Self {
        Self::new()
    }
}

plan_algorithm!(DelayAll);

/// Runs every job untested in ascending `p̄`.
pub struct UntestedAll<T> {
    plan: Option<Plan<T>>,
}

impl<T: Time> UntestedAll<T> {
    pub fn new() -> Self {
        UntestedAll { plan: None }
    }

    fn label(&self) -> String {
        "untested".into()
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        Ok(all_untested(upper))
    }
}

impl<T: Time> Default for UntestedAll<T> {
    fn default() -> Self {
        Self::new()
    }
}

plan_algorithm!(UntestedAll);

pub(crate) fn all_untested<T: Time>(upper: &[T]) -> Plan<T> {
    let mut order: Vec<usize> = (0..upper.len()).collect();
    order.sort_by(|&a, &b| crate::num::cmp_time(&upper[a], &upper[b]).then(a.cmp(&b)));
    Plan::new(order, Vec::new(), Box::new(|_, _: &T| true))
}
