//! Offline optima with full knowledge of the processing times.

use thiserror::Error;

use crate::model::{Action, Instance, JobId, Objective, Trace};
use crate::num::{cmp_time, min_time, Time};

/// The canonical optimal schedule for the sum of completion times.
#[derive(Clone, Debug, PartialEq)]
pub struct OptPlan<T> {
    /// Job ids in execution order.
    pub order: Vec<JobId>,
    pub tested: Vec<bool>,
    pub cost: T,
}

impl<T: Time> OptPlan<T> {
    /// Actions realizing the plan: a tested job runs right after its test.
    pub fn actions(&self) -> Vec<Action> {
        let mut out = Vec::with_capacity(2 * self.order.len());
        for &j in &self.order {
            if self.tested[j] {
                out.push(Action::Test(j));
                out.push(Action::ExecuteTested(j));
            } else {
                out.push(Action::ExecuteUntested(j));
            }
        }
        out
    }

    pub fn trace(&self, instance: &Instance<T>) -> Trace<T> {
        Trace::from_actions(instance, &self.actions()).expect("plan is a legal schedule")
    }
}

/// Effective length of a job in an optimal schedule, `min{1 + p, p̄}`.
pub fn key<T: Time>(upper: &T, proc: &T) -> T {
    min_time(T::one() + proc.clone(), upper.clone())
}

/// Optimal schedule for `Σ C_j`: every job gets its cheaper option (test iff
/// `1 + p < p̄`), and jobs run in ascending order of that cost, ties by id.
pub fn optimal_sum<T: Time>(instance: &Instance<T>) -> OptPlan<T> {
    let keys: Vec<T> = instance.jobs().iter().map(|j| key(&j.upper, &j.proc)).collect();
    let tested: Vec<bool> =
        instance.jobs().iter().map(|j| T::one() + j.proc.clone() < j.upper).collect();
    let mut order: Vec<JobId> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| cmp_time(&keys[a], &keys[b]).then(a.cmp(&b)));
    let mut clock = T::zero();
    let mut cost = T::zero();
    for &j in &order {
        clock += keys[j].clone();
        cost += clock.clone();
    }
    OptPlan { order, tested, cost }
}

/// Optimal makespan, `Σ_j min{1 + p_j, p̄_j}`.
pub fn optimal_makespan<T: Time>(instance: &Instance<T>) -> T {
    instance.jobs().iter().map(|j| key(&j.upper, &j.proc)).sum()
}

pub fn optimal<T: Time>(instance: &Instance<T>, objective: Objective) -> T {
    match objective {
        Objective::Sum => optimal_sum(instance).cost,
        Objective::Makespan => optimal_makespan(instance),
    }
}

pub const BRUTE_FORCE_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OfflineError {
    #[error("brute force refuses n = {n} (limit {BRUTE_FORCE_MAX_N})")]
    TooLarge { n: usize },
}

/// Minimum objective over every legal action sequence, by memoized search
/// over job states (untouched, tested, executed). Makes no structural
/// assumption about optimal schedules, so it checks [`optimal_sum`] rather
/// than restating it.
pub fn brute_force_optimum<T: Time>(instance: &Instance<T>, objective: Objective) -> Result<T, OfflineError> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(OfflineError::TooLarge { n });
    }
    let pow3: Vec<usize> = (0..=n).map(|k| 3usize.pow(k as u32)).collect();
    let mut memo: Vec<Option<T>> = vec![None; pow3[n]];
    let mut states = vec![0u8; n];
    Ok(search(instance, objective, &pow3, &mut memo, &mut states, 0, n))
}

fn search<T: Time>(
    instance: &Instance<T>,
    objective: Objective,
    pow3: &[usize],
    memo: &mut Vec<Option<T>>,
    states: &mut [u8],
    code: usize,
    pending: usize,
) -> T {
    if pending == 0 {
        return T::zero();
    }
    if let Some(v) = &memo[code] {
        return v.clone();
    }
    // An action of length d delays every job still pending by d.
    let weight = match objective {
        Objective::Sum => T::from_usize(pending),
        Objective::Makespan => T::one(),
    };
    let mut best: Option<T> = None;
    for j in 0..states.len() {
        let job = instance.job(j);
        let options: &[(u8, u8)] = match states[j] {
            0 => &[(1, 0), (2, 1)],
            1 => &[(2, 2)],
            _ => &[],
        };
        for &(next, kind) in options {
            let d = match kind {
                0 => T::one(),
                1 => job.upper.clone(),
                _ => job.proc.clone(),
            };
            let old = states[j];
            states[j] = next;
            let code2 = code + (next - old) as usize * pow3[j];
            let rest = search(instance, objective, pow3, memo, states, code2, pending - (next == 2) as usize);
            states[j] = old;
            let total = weight.clone() * d + rest;
            if best.as_ref().map_or(true, |b| total < *b) {
                best = Some(total);
            }
        }
    }
    let best = best.expect("a pending job has a legal action");
    memo[code] = Some(best.clone());
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cost_of_trace;
    use crate::num::Rational;

    fn r(x: f64) -> Rational {
        Rational::from_f64(x)
    }

    #[test]
    fn two_jobs_with_equal_keys() {
        let inst = Instance::from_pairs([(r(3.0), r(1.0)), (r(2.0), r(2.0))]);
        let plan = optimal_sum(&inst);
        assert_eq!(plan.cost, r(6.0));
        assert_eq!(plan.order, vec![0, 1]);
        assert_eq!(plan.tested, vec![true, false]);
        assert_eq!(brute_force_optimum(&inst, Objective::Sum).unwrap(), r(6.0));
    }

    #[test]
    fn job_just_below_two_is_tested() {
        let inst = Instance::from_pairs([(r(2.0 - 1e-6), r(0.0))]);
        let plan = optimal_sum(&inst);
        assert_eq!(plan.cost, r(1.0));
        assert_eq!(plan.tested, vec![true]);
    }

    #[test]
    fn empty() {
        let inst = Instance::<Rational>::empty();
        assert_eq!(optimal_sum(&inst).cost, r(0.0));
        assert_eq!(brute_force_optimum(&inst, Objective::Sum).unwrap(), r(0.0));
        assert_eq!(optimal_makespan(&inst), r(0.0));
    }

    #[test]
    fn makespan_examples() {
        let one = |u, p| Instance::from_pairs([(r(u), r(p))]);
        assert_eq!(optimal_makespan(&one(2.0, 2.0)), r(2.0));
        assert_eq!(optimal_makespan(&one(2.0, 0.0)), r(1.0));
        let two = Instance::from_pairs([(r(5.0), r(1.0)), (r(1.0), r(1.0))]);
        assert_eq!(optimal_makespan(&two), r(3.0));
        assert_eq!(brute_force_optimum(&two, Objective::Makespan).unwrap(), r(3.0));
    }

    #[test]
    fn brute_force_small_cases() {
        let one = Instance::from_pairs([(r(1.0), r(1.0))]);
        assert_eq!(brute_force_optimum(&one, Objective::Sum).unwrap(), r(1.0));
        let twins = Instance::from_pairs([(r(3.0), r(0.0)), (r(3.0), r(0.0))]);
        assert_eq!(brute_force_optimum(&twins, Objective::Sum).unwrap(), r(3.0));
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let inst = Instance::from_pairs((0..11).map(|_| (r(1.0), r(1.0))));
        assert_eq!(brute_force_optimum(&inst, Objective::Sum), Err(OfflineError::TooLarge { n: 11 }));
    }

    #[test]
    fn plan_trace_reproduces_cost() {
        let inst = Instance::from_pairs([(r(4.0), r(0.5)), (r(1.5), r(1.0)), (r(3.0), r(2.0)), (r(2.0), r(1.0))]);
        let plan = optimal_sum(&inst);
        let trace = plan.trace(&inst);
        assert_eq!(cost_of_trace(&trace).unwrap().0, plan.cost);
        assert_eq!(*trace.makespan(), optimal_makespan(&inst));
    }
}
