use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::threshold::{all_untested, Threshold};
use super::{uniform_limit, Plan};
use crate::engine::{EngineError, OnlineAlgorithm};
use crate::model::{Action, JobId};
use crate::num::{cmp_time, max_time, Time};

/// A deferred job, ordered by processing time then id.
struct Pending<T>(T, JobId);

impl<T: Time> PartialEq for Pending<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Time> Eq for Pending<T> {}

impl<T: Time> PartialOrd for Pending<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Time> Ord for Pending<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_time(&self.0, &other.0).then(self.1.cmp(&other.1))
    }
}

/// Accumulator values at one decision of the main loop.
#[derive(Clone, Debug, PartialEq)]
pub struct BeatSnapshot<T> {
    pub total_test: T,
    pub total_exec: T,
    /// Smallest processing time among tested, unexecuted long jobs.
    pub pending_min: Option<T>,
    /// Whether this decision executed a deferred job.
    pub executed_deferred: bool,
}

/// For uniform upper limits. Balances the time spent testing long jobs
/// against the time spent executing them: while untested jobs remain, the
/// cheapest deferred job runs as soon as `TotalExec + p_k ≤ TotalTest`;
/// otherwise the next untested job (lowest id) is tested, and executed at
/// once if `p ≤ E = max{1, p̄ − 1}`.
pub struct Beat<T> {
    n: usize,
    e: T,
    next_untested: usize,
    pending: BinaryHeap<Reverse<Pending<T>>>,
    ready: Option<Action>,
    total_test: T,
    total_exec: T,
    history: Vec<BeatSnapshot<T>>,
}

impl<T: Time> Beat<T> {
    pub fn new() -> Self {
        Beat {
            n: 0,
            e: T::one(),
            next_untested: 0,
            pending: BinaryHeap::new(),
            ready: None,
            total_test: T::zero(),
            total_exec: T::zero(),
            history: Vec::new(),
        }
    }

    pub fn history(&self) -> &[BeatSnapshot<T>] {
        &self.history
    }

    pub fn short_limit(&self) -> &T {
        &self.e
    }
}

impl<T: Time> Default for Beat<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Time> OnlineAlgorithm<T> for Beat<T> {
    fn name(&self) -> String {
        "beat".into()
    }

    fn init(&mut self, upper: &[T]) -> Result<(), EngineError> {
        let p_bar = uniform_limit(upper, "beat")?.unwrap_or_else(T::one);
        *self = Beat::new();
        self.n = upper.len();
        self.e = max_time(T::one(), p_bar - T::one());
        Ok(())
    }

    fn next_action(&mut self) -> Option<Action> {
        if let Some(a) = self.ready.take() {
            return Some(a);
        }
        if self.next_untested < self.n {
            let pending_min = self.pending.peek().map(|Reverse(p)| p.0.clone());
            let run_deferred = pending_min
                .as_ref()
                .is_some_and(|p| self.total_exec.clone() + p.clone() <= self.total_test);
            if run_deferred {
                let Reverse(Pending(p, k)) = self.pending.pop().expect("peeked");
                self.total_exec += p;
                self.history.push(BeatSnapshot {
                    total_test: self.total_test.clone(),
                    total_exec: self.total_exec.clone(),
                    pending_min,
                    executed_deferred: true,
                });
                return Some(Action::ExecuteTested(k));
            }
            self.history.push(BeatSnapshot {
                total_test: self.total_test.clone(),
                total_exec: self.total_exec.clone(),
                pending_min,
                executed_deferred: false,
            });
            self.next_untested += 1;
            return Some(Action::Test(self.next_untested - 1));
        }
        self.pending.pop().map(|Reverse(Pending(_, k))| Action::ExecuteTested(k))
    }

    fn reveal(&mut self, job: JobId, proc: T) {
        if proc <= self.e {
            self.ready = Some(Action::ExecuteTested(job));
        } else {
            self.total_test += T::one();
            self.pending.push(Reverse(Pending(proc, job)));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinedThresholds {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
}

impl CombinedThresholds {
    /// Fixpoint of the Beat ratio and its crossing with the Threshold ratio,
    /// as computed by [`crate::analysis::uniform::solve_thresholds`].
    pub const SOLVED: CombinedThresholds = CombinedThresholds { t1: 1.9337914333, t2: 2.2948116014 };
}

impl Default for CombinedThresholds {
    fn default() -> Self {
        Self::SOLVED
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombinedBranch {
    Untested,
    Beat,
    Threshold,
}

/// For uniform upper limits: no tests below `T1`, [`Beat`] on `[T1, T2]`,
/// [`Threshold`] above `T2`.
pub struct Combined<T> {
    thresholds: CombinedThresholds,
    branch: Option<CombinedBranch>,
    inner: Option<Box<dyn OnlineAlgorithm<T>>>,
}

impl<T: Time> Combined<T> {
    pub fn new(thresholds: CombinedThresholds) -> Self {
        Combined { thresholds, branch: None, inner: None }
    }

    pub fn branch(&self) -> Option<CombinedBranch> {
        self.branch
    }

    pub fn branch_for(&self, p_bar: &T) -> CombinedBranch {
        if *p_bar < T::from_f64(self.thresholds.t1) {
            CombinedBranch::Untested
        } else if *p_bar <= T::from_f64(self.thresholds.t2) {
            CombinedBranch::Beat
        } else {
            CombinedBranch::Threshold
        }
    }
}

struct Untested<T>(Plan<T>);

impl<T: Time> OnlineAlgorithm<T> for Untested<T> {
    fn name(&self) -> String {
        "untested".into()
    }
    fn init(&mut self, upper: &[T]) -> Result<(), EngineError> {
        self.0 = all_untested(upper);
        Ok(())
    }
    fn next_action(&mut self) -> Option<Action> {
        self.0.next_action()
    }
    fn reveal(&mut self, job: JobId, proc: T) {
        self.0.reveal(job, proc)
    }
}

impl<T: Time> OnlineAlgorithm<T> for Combined<T> {
    fn name(&self) -> String {
        format!("combined[T1={},T2={}]", self.thresholds.t1, self.thresholds.t2)
    }

    fn init(&mut self, upper: &[T]) -> Result<(), EngineError> {
        let branch = match uniform_limit(upper, "combined")? {
            Some(p_bar) => self.branch_for(&p_bar),
            None => CombinedBranch::Untested,
        };
        let mut inner: Box<dyn OnlineAlgorithm<T>> = match branch {
            CombinedBranch::Untested => Box::new(Untested(all_untested(upper))),
            CombinedBranch::Beat => Box::new(Beat::new()),
            CombinedBranch::Threshold => Box::new(Threshold::new()),
        };
        inner.init(upper)?;
        self.branch = Some(branch);
        self.inner = Some(inner);
        Ok(())
    }

    fn next_action(&mut self) -> Option<Action> {
        self.inner.as_mut().expect("init called").next_action()
    }

    fn reveal(&mut self, job: JobId, proc: T) {
        self.inner.as_mut().expect("init called").reveal(job, proc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;
    use crate::model::Instance;
    use crate::num::Rational;

    fn r(x: f64) -> Rational {
        Rational::from_f64(x)
    }

    #[test]
    fn all_short_jobs() {
        let n = 9;
        let inst = Instance::from_pairs((0..n).map(|_| (r(2.0), r(0.0))));
        let trace = simulate(&mut Beat::new(), &inst).unwrap();
        assert_eq!(*trace.total_completion(), Rational::from_usize(n * (n + 1) / 2));
    }

    #[test]
    fn all_long_jobs_interleave_after_two_tests() {
        let inst = Instance::from_pairs((0..6).map(|_| (r(2.0), r(2.0))));
        let mut beat = Beat::new();
        let trace = simulate(&mut beat, &inst).unwrap();
        let kinds: Vec<_> = trace.actions().map(|a| a.kind()).collect();
        assert_eq!(
            kinds,
            [
                "test", "test", "exec_tested", "test", "test", "exec_tested", "test", "test", "exec_tested",
                "exec_tested", "exec_tested", "exec_tested",
            ]
        );
        for s in beat.history() {
            assert!(s.total_exec <= s.total_test);
            if let (Some(p), false) = (&s.pending_min, s.executed_deferred) {
                assert!(s.total_exec.clone() + p.clone() > s.total_test);
                assert!(s.total_exec >= s.total_test.clone() - r(2.0));
            }
        }
    }

    #[test]
    fn one_long_job() {
        let inst = Instance::from_pairs([(r(3.0), r(3.0))]);
        let mut beat = Beat::new();
        assert_eq!(*simulate(&mut beat, &inst).unwrap().total_completion(), r(4.0));
        assert_eq!(beat.short_limit(), &r(2.0));
    }

    #[test]
    fn rejects_mixed_limits() {
        let inst = Instance::from_pairs([(r(3.0), r(3.0)), (r(2.0), r(0.0))]);
        assert!(matches!(simulate(&mut Beat::new(), &inst), Err(EngineError::Config(_))));
        let mut c = Combined::new(CombinedThresholds::default());
        assert!(matches!(simulate(&mut c, &inst), Err(EngineError::Config(_))));
    }

    #[test]
    fn combined_dispatch() {
        let run = |p_bar: f64| {
            let inst = Instance::from_pairs((0..4).map(|_| (p_bar, 0.0)));
            let mut c = Combined::new(CombinedThresholds::default());
            let trace = simulate(&mut c, &inst).unwrap();
            (c.branch().unwrap(), *trace.total_completion())
        };
        assert_eq!(run(1.5), (CombinedBranch::Untested, 1.5 * 10.0));
        assert_eq!(run(2.0).0, CombinedBranch::Beat);
        assert_eq!(run(3.0).0, CombinedBranch::Threshold);
        let c = Combined::<f64>::new(CombinedThresholds { t1: 1.9, t2: 2.3 });
        assert_eq!(c.branch_for(&1.9), CombinedBranch::Beat);
        assert_eq!(c.branch_for(&2.3), CombinedBranch::Beat);
    }
}
