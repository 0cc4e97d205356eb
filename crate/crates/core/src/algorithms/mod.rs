//! Online algorithms.
//!
//! Most algorithms here share one shape: run some jobs untested, test the
//! rest in a fixed order, execute each tested job right away or defer it, and
//! finish with the deferred jobs in ascending processing time. [`Plan`]
//! implements that shape; each algorithm supplies the prefix, the test order
//! and the execute-now rule.

mod beat;
mod makespan;
mod random;
mod threshold;
mod ute;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{AlgorithmFactory, EngineError, OnlineAlgorithm};
use crate::model::{Action, JobId, Objective};
use crate::num::{cmp_time, Time};

pub use beat::{Beat, BeatSnapshot, Combined, CombinedThresholds};
pub use makespan::{MakespanDet, MakespanRand};
pub use random::{Random, RandomParams};
pub use threshold::{DelayAll, Threshold, UntestedAll};
pub use ute::{ScheduleFamily, Ute, UteParams};

/// Jobs with `p̄_j < rho`, ascending `p̄_j`, ties by id. Every algorithm may
/// start by running these untested.
pub fn preprocess_small_limits<T: Time>(upper: &[T], rho: &T) -> Vec<JobId> {
    let mut small: Vec<JobId> = (0..upper.len()).filter(|&j| upper[j] < *rho).collect();
    small.sort_by(|&a, &b| cmp_time(&upper[a], &upper[b]).then(a.cmp(&b)));
    small
}

/// The jobs not in `prefix`, in id order.
pub(crate) fn remaining(n: usize, prefix: &[JobId]) -> Vec<JobId> {
    let mut skip = vec![false; n];
    for &j in prefix {
        skip[j] = true;
    }
    (0..n).filter(|&j| !skip[j]).collect()
}

/// Decides, for the `rank`-th tested job (0-based) with revealed time `p`,
/// whether to execute it immediately.
pub(crate) type Rule<T> = Box<dyn FnMut(usize, &T) -> bool + Send>;

/// Untested prefix, tests in a fixed order, deferred jobs last.
pub(crate) struct Plan<T> {
    ready: VecDeque<Action>,
    tests: Vec<JobId>,
    next_test: usize,
    tested: usize,
    rule: Rule<T>,
    deferred: Vec<(T, JobId)>,
    sorted: bool,
    next_deferred: usize,
}

impl<T: Time> Plan<T> {
    pub(crate) fn new(untested: Vec<JobId>, tests: Vec<JobId>, rule: Rule<T>) -> Self {
        Plan {
            ready: untested.into_iter().map(Action::ExecuteUntested).collect(),
            tests,
            next_test: 0,
            tested: 0,
            rule,
            deferred: Vec::new(),
            sorted: false,
            next_deferred: 0,
        }
    }

    pub(crate) fn next_action(&mut self) -> Option<Action> {
        if let Some(a) = self.ready.pop_front() {
            return Some(a);
        }
        if self.next_test < self.tests.len() {
            self.next_test += 1;
            return Some(Action::Test(self.tests[self.next_test - 1]));
        }
        if !self.sorted {
            self.deferred.sort_by(|a, b| cmp_time(&a.0, &b.0).then(a.1.cmp(&b.1)));
            self.sorted = true;
        }
        let (_, j) = self.deferred.get(self.next_deferred)?;
        self.next_deferred += 1;
        Some(Action::ExecuteTested(*j))
    }

    pub(crate) fn reveal(&mut self, job: JobId, proc: T) {
        let rank = self.tested;
        self.tested += 1;
        if (self.rule)(rank, &proc) {
            self.ready.push_back(Action::ExecuteTested(job));
        } else {
            self.deferred.push((proc, job));
        }
    }
}

/// Implements [`OnlineAlgorithm`] for a type with a `plan: Option<Plan<T>>`
/// field and inherent `label(&self) -> String` and
/// `build(&self, upper: &[T]) -> Result<Plan<T>, EngineError>` methods.
macro_rules! plan_algorithm {
    ($ty:ident) => {
        impl<T: $crate::num::Time> $crate::engine::OnlineAlgorithm<T> for $ty<T> {
            fn name(&self) -> String {
                self.label()
            }
            fn init(&mut self, upper: &[T]) -> Result<(), $crate::engine::EngineError> {
                self.plan = Some(self.build(upper)?);
                Ok(())
            }
            fn next_action(&mut self) -> Option<$crate::model::Action> {
                self.plan.as_mut().expect("init called").next_action()
            }
            fn reveal(&mut self, job: $crate::model::JobId, proc: T) {
                self.plan.as_mut().expect("init called").reveal(job, proc)
            }
        }
    };
}
pub(crate) use plan_algorithm;

/// The common upper limit, or a configuration error for mixed limits.
pub(crate) fn uniform_limit<T: Time>(upper: &[T], algorithm: &str) -> Result<Option<T>, EngineError> {
    match upper.first() {
        None => Ok(None),
        Some(first) if upper.iter().all(|u| u == first) => Ok(Some(first.clone())),
        Some(_) => Err(EngineError::Config(format!("{algorithm} requires a uniform upper limit"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("`{algorithm}` has no parameter `{key}`")]
    UnknownParameter { algorithm: String, key: String },
    #[error("parameter `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
    #[error("malformed algorithm spec `{0}` (expected name or name[key=value,...])")]
    Malformed(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

/// An algorithm selected by key, with parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AlgorithmSpec {
    Threshold,
    DelayAll,
    Random(RandomParams),
    Beat,
    Combined(CombinedThresholds),
    Ute(UteParams),
    MakespanDet,
    MakespanRand,
    Family { nu: f64, lambda: f64 },
    Untested,
}

impl AlgorithmSpec {
    pub fn key(&self) -> &'static str {
        match self {
            AlgorithmSpec::Threshold => "threshold",
            AlgorithmSpec::DelayAll => "delay_all",
            AlgorithmSpec::Random(_) => "random",
            AlgorithmSpec::Beat => "beat",
            AlgorithmSpec::Combined(_) => "combined",
            AlgorithmSpec::Ute(_) => "ute",
            AlgorithmSpec::MakespanDet => "makespan_det",
            AlgorithmSpec::MakespanRand => "makespan_rand",
            AlgorithmSpec::Family { .. } => "family",
            AlgorithmSpec::Untested => "untested",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, AlgorithmSpec::Random(_) | AlgorithmSpec::MakespanRand)
    }

    /// The objective the algorithm is designed for.
    pub fn objective(&self) -> Objective {
        match self {
            AlgorithmSpec::MakespanDet | AlgorithmSpec::MakespanRand => Objective::Makespan,
            _ => Objective::Sum,
        }
    }

    /// A fresh algorithm; randomized algorithms draw from `rng`.
    pub fn instantiate<T: Time>(&self, rng: ChaCha8Rng) -> Box<dyn OnlineAlgorithm<T>> {
        match self {
            AlgorithmSpec::Threshold => Box::new(Threshold::new()),
            AlgorithmSpec::DelayAll => Box::new(DelayAll::new()),
            AlgorithmSpec::Random(p) => Box::new(Random::new(*p, rng)),
            AlgorithmSpec::Beat => Box::new(Beat::new()),
            AlgorithmSpec::Combined(t) => Box::new(Combined::new(*t)),
            AlgorithmSpec::Ute(p) => Box::new(Ute::new(*p)),
            AlgorithmSpec::MakespanDet => Box::new(MakespanDet::new()),
            AlgorithmSpec::MakespanRand => Box::new(MakespanRand::new(rng)),
            AlgorithmSpec::Family { nu, lambda } => Box::new(ScheduleFamily::new(*nu, *lambda)),
            AlgorithmSpec::Untested => Box::new(UntestedAll::new()),
        }
    }

    /// A deterministic algorithm, or a randomized one seeded with `seed`.
    pub fn build<T: Time>(&self, seed: u64) -> Box<dyn OnlineAlgorithm<T>> {
        self.instantiate(crate::engine::trial_rng(seed, 0))
    }

    fn check(self) -> Result<Self, SpecError> {
        let bad = |msg: String| Err(SpecError::Invalid(msg));
        match &self {
            AlgorithmSpec::Random(p) if !(1.0 <= p.t && p.t <= p.e) => {
                bad(format!("random needs 1 <= T <= E, got T={} E={}", p.t, p.e))
            }
            AlgorithmSpec::Combined(c) if !(c.t1 < c.t2) => {
                bad(format!("combined needs T1 < T2, got T1={} T2={}", c.t1, c.t2))
            }
            AlgorithmSpec::Ute(p) if !(p.rho > 1.0) => bad(format!("ute needs rho > 1, got {}", p.rho)),
            AlgorithmSpec::Family { nu, lambda }
                if !(*nu >= 0.0 && *lambda >= 0.0 && nu + lambda <= 1.0 + 1e-12) =>
            {
                bad(format!("family needs nu, lambda >= 0 and nu + lambda <= 1, got {nu}, {lambda}"))
            }
            _ => Ok(self),
        }
    }
}

impl<T: Time> AlgorithmFactory<T> for AlgorithmSpec {
    fn build(&self, rng: ChaCha8Rng) -> Box<dyn OnlineAlgorithm<T>> {
        self.instantiate(rng)
    }

    fn support(&self, upper: &[T]) -> Option<Vec<(T, Box<dyn OnlineAlgorithm<T>>)>> {
        match self {
            AlgorithmSpec::Random(p) => random::support(*p, upper),
            AlgorithmSpec::MakespanRand => makespan::support(upper),
            other => Some(vec![(T::one(), other.build::<T>(0))]),
        }
    }
}

/// Splits `name[k=v,...]` into the name and its key/value pairs.
pub fn parse_keyed(s: &str) -> Result<(String, Vec<(String, String)>), SpecError> {
    let s = s.trim();
    let (name, args) = match s.find('[') {
        None => (s, ""),
        Some(open) => {
            let inner = s[open + 1..].strip_suffix(']').ok_or_else(|| SpecError::Malformed(s.into()))?;
            (&s[..open], inner)
        }
    };
    if name.is_empty() {
        return Err(SpecError::Malformed(s.into()));
    }
    let mut pairs = Vec::new();
    for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| SpecError::Malformed(s.into()))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.trim().to_string(), pairs))
}

fn number(key: &str, value: &str) -> Result<f64, SpecError> {
    <f64 as Time>::parse(value).ok_or_else(|| SpecError::BadValue { key: key.into(), value: value.into() })
}

impl FromStr for AlgorithmSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, pairs) = parse_keyed(s)?;
        let unknown = |key: &str| SpecError::UnknownParameter { algorithm: name.clone(), key: key.into() };
        let mut spec = match name.as_str() {
            "threshold" => AlgorithmSpec::Threshold,
            "delay_all" => AlgorithmSpec::DelayAll,
            "random" => AlgorithmSpec::Random(RandomParams::default()),
            "beat" => AlgorithmSpec::Beat,
            "combined" => AlgorithmSpec::Combined(CombinedThresholds::default()),
            "ute" => AlgorithmSpec::Ute(UteParams::default()),
            "makespan_det" => AlgorithmSpec::MakespanDet,
            "makespan_rand" => AlgorithmSpec::MakespanRand,
            "family" => AlgorithmSpec::Family { nu: 0.0, lambda: 0.0 },
            "untested" => AlgorithmSpec::Untested,
            _ => return Err(SpecError::UnknownAlgorithm(name)),
        };
        for (key, value) in &pairs {
            let x = number(key, value)?;
            let slot = match (&mut spec, key.as_str()) {
                (AlgorithmSpec::Random(p), "T") => &mut p.t,
                (AlgorithmSpec::Random(p), "E") => &mut p.e,
                (AlgorithmSpec::Combined(c), "T1") => &mut c.t1,
                (AlgorithmSpec::Combined(c), "T2") => &mut c.t2,
                (AlgorithmSpec::Ute(p), "rho") => &mut p.rho,
                (AlgorithmSpec::Family { nu, .. }, "nu") => nu,
                (AlgorithmSpec::Family { lambda, .. }, "lambda") => lambda,
                _ => return Err(unknown(key)),
            };
            *slot = x;
        }
        spec.check()
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::Random(p) => write!(f, "random[T={},E={}]", p.t, p.e),
            AlgorithmSpec::Combined(c) => write!(f, "combined[T1={},T2={}]", c.t1, c.t2),
            AlgorithmSpec::Ute(p) => write!(f, "ute[rho={}]", p.rho),
            AlgorithmSpec::Family { nu, lambda } => write!(f, "family[nu={nu},lambda={lambda}]"),
            other => f.write_str(other.key()),
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preprocess_examples() {
        assert_eq!(preprocess_small_limits(&[3.0, 1.2, 0.5], &2.0), vec![2, 1]);
        assert!(preprocess_small_limits(&[3.0, 2.0], &2.0).is_empty());
        assert_eq!(preprocess_small_limits(&[1.0, 1.0, 5.0, 1.0], &2.0), vec![0, 1, 3]);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("threshold".parse::<AlgorithmSpec>().unwrap(), AlgorithmSpec::Threshold);
        let r: AlgorithmSpec = "random[T=1.8,E=3]".parse().unwrap();
        assert_eq!(r, AlgorithmSpec::Random(RandomParams { t: 1.8, e: 3.0 }));
        assert_eq!(r.to_string().parse::<AlgorithmSpec>().unwrap(), r);
        let c: AlgorithmSpec = "combined[T1=1.9]".parse().unwrap();
        assert_eq!(c, AlgorithmSpec::Combined(CombinedThresholds { t1: 1.9, ..Default::default() }));
        assert!(matches!("nope".parse::<AlgorithmSpec>(), Err(SpecError::UnknownAlgorithm(_))));
        assert!(matches!("ute[T=2]".parse::<AlgorithmSpec>(), Err(SpecError::UnknownParameter { .. })));
        assert!(matches!("random[T=x]".parse::<AlgorithmSpec>(), Err(SpecError::BadValue { .. })));
        assert!(matches!("random[T=3,E=2]".parse::<AlgorithmSpec>(), Err(SpecError::Invalid(_))));
        assert!(matches!("random[T=3".parse::<AlgorithmSpec>(), Err(SpecError::Malformed(_))));
        let f: AlgorithmSpec = "family[nu=0.1, lambda=0.2]".parse().unwrap();
        assert_eq!(f, AlgorithmSpec::Family { nu: 0.1, lambda: 0.2 });
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        let mut all = permutations(4);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }
}
