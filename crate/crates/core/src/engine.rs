//! Runs online algorithms under the information model.
//!
//! The engine owns the clock and the hidden processing times. An algorithm
//! sees the upper limits up front, asks for nothing and is asked for its next
//! action; the processing time of a job reaches it only through
//! [`OnlineAlgorithm::reveal`], right after the job's test.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Action, Instance, JobId, Objective, Step, Trace, TraceError};
use crate::num::Time;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("protocol violation at action {index} ({action}): {source}")]
    Protocol { index: usize, action: Action, source: TraceError },
    #[error("adversary revealed p = {value} for job {job} with upper limit {upper}")]
    Adversary { job: JobId, value: f64, upper: f64 },
    #[error("algorithm stopped after executing {executed} of {n} jobs")]
    Incomplete { executed: usize, n: usize },
    #[error("source covers {found} jobs, upper limits list {expected}")]
    SourceSize { expected: usize, found: usize },
}

/// An online algorithm, driven one action at a time.
pub trait OnlineAlgorithm<T: Time>: Send {
    fn name(&self) -> String;

    /// Receives the public part of the instance before the first action.
    fn init(&mut self, upper: &[T]) -> Result<(), EngineError>;

    /// The next action, or `None` once the algorithm considers itself done.
    fn next_action(&mut self) -> Option<Action>;

    /// Called when the test of `job` completes.
    fn reveal(&mut self, job: JobId, proc: T);
}

impl<T: Time> OnlineAlgorithm<T> for Box<dyn OnlineAlgorithm<T>> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn init(&mut self, upper: &[T]) -> Result<(), EngineError> {
        (**self).init(upper)
    }
    fn next_action(&mut self) -> Option<Action> {
        (**self).next_action()
    }
    fn reveal(&mut self, job: JobId, proc: T) {
        (**self).reveal(job, proc)
    }
}

/// How an algorithm first touches a job.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Touch {
    Test,
    ExecuteUntested,
}

/// Supplies processing times. `commit` is called exactly once per job, at its
/// first touch; the returned value is final.
pub trait RevealSource<T: Time> {
    fn n(&self) -> Option<usize> {
        None
    }

    fn commit(&mut self, job: JobId, upper: &T, touch: Touch) -> T;
}

/// Reveals the processing times stored in an instance.
pub struct StaticSource<'a, T> {
    instance: &'a Instance<T>,
}

impl<'a, T: Time> StaticSource<'a, T> {
    pub fn new(instance: &'a Instance<T>) -> Self {
        StaticSource { instance }
    }
}

impl<T: Time> RevealSource<T> for StaticSource<'_, T> {
    fn n(&self) -> Option<usize> {
        Some(self.instance.n())
    }

    fn commit(&mut self, job: JobId, _upper: &T, _touch: Touch) -> T {
        self.instance.job(job).proc.clone()
    }
}

/// Result of one engine run.
#[derive(Clone, Debug, PartialEq)]
pub struct Run<T> {
    pub trace: Trace<T>,
    /// The upper limits together with the processing times the source
    /// committed to; the instance the offline optimum is measured on.
    pub realized: Instance<T>,
}

pub fn run<T: Time, A, S>(algorithm: &mut A, source: &mut S, upper: &[T]) -> Result<Run<T>, EngineError>
where
    A: OnlineAlgorithm<T> + ?Sized,
    S: RevealSource<T> + ?Sized,
{
    let n = upper.len();
    if let Some(found) = source.n() {
        if found != n {
            return Err(EngineError::SourceSize { expected: n, found });
        }
    }
    if let Some((job, u)) = upper.iter().enumerate().find(|(_, u)| u.is_negative()) {
        return Err(EngineError::Config(format!("job {job}: negative upper limit {u}")));
    }
    algorithm.init(upper)?;

    let mut ledger = crate::model::Ledger::new(n);
    let mut committed: Vec<Option<T>> = vec![None; n];
    let mut steps = Vec::with_capacity(2 * n);
    while ledger.executed() < n {
        let index = steps.len();
        let Some(action) = algorithm.next_action() else {
            return Err(EngineError::Incomplete { executed: ledger.executed(), n });
        };
        ledger
            .check(index, action)
            .map_err(|source| EngineError::Protocol { index, action, source })?;
        let job = action.job();
        let touch = match action {
            Action::Test(_) => Some(Touch::Test),
            Action::ExecuteUntested(_) => Some(Touch::ExecuteUntested),
            Action::ExecuteTested(_) => None,
        };
        if let Some(touch) = touch {
            let p = source.commit(job, &upper[job], touch);
            if p.is_negative() || p > upper[job] {
                return Err(EngineError::Adversary { job, value: p.to_f64(), upper: upper[job].to_f64() });
            }
            committed[job] = Some(p);
        }
        let duration = match action {
            Action::Test(_) => T::one(),
            Action::ExecuteTested(_) => committed[job].clone().expect("tested job has a committed time"),
            Action::ExecuteUntested(_) => upper[job].clone(),
        };
        let start = ledger.apply(action, duration.clone());
        steps.push(Step { action, start, duration });
        if let Action::Test(_) = action {
            algorithm.reveal(job, committed[job].clone().expect("just committed"));
        }
    }
    let trace = ledger.finish(steps).expect("every job executed");
    let realized = Instance::from_pairs(
        upper.iter().cloned().zip(committed.into_iter().map(|p| p.expect("every job touched"))),
    );
    Ok(Run { trace, realized })
}

/// Runs `algorithm` on a fixed instance.
pub fn simulate<T: Time, A>(algorithm: &mut A, instance: &Instance<T>) -> Result<Trace<T>, EngineError>
where
    A: OnlineAlgorithm<T> + ?Sized,
{
    let mut source = StaticSource::new(instance);
    Ok(run(algorithm, &mut source, &instance.upper_limits())?.trace)
}

/// Something that builds fresh algorithm instances for repeated runs.
pub trait AlgorithmFactory<T: Time>: Sync {
    /// A fresh algorithm whose random choices are drawn from `rng`.
    fn build(&self, rng: ChaCha8Rng) -> Box<dyn OnlineAlgorithm<T>>;

    /// Every outcome of the algorithm's randomness on these upper limits,
    /// as `(probability, algorithm with that outcome fixed)`, or `None` if
    /// the support is too large to enumerate.
    fn support(&self, upper: &[T]) -> Option<Vec<(T, Box<dyn OnlineAlgorithm<T>>)>>;
}

/// Seed of trial `index` under master seed `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 of the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, index))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expectation {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub exact: bool,
}

/// Exact expected objective, by enumerating the algorithm's randomness.
pub fn exact_expectation<T: Time, F>(
    factory: &F,
    instance: &Instance<T>,
    objective: Objective,
) -> Result<Option<T>, EngineError>
where
    F: AlgorithmFactory<T> + ?Sized,
{
    let upper = instance.upper_limits();
    let Some(support) = factory.support(&upper) else {
        return Ok(None);
    };
    let mut total = T::zero();
    for (weight, mut algorithm) in support {
        let trace = simulate(&mut algorithm, instance)?;
        total += weight * objective.of(&trace);
    }
    Ok(Some(total))
}

/// Mean objective over `trials` seeded runs, in parallel. Trial `i` uses
/// [`trial_rng`]`(seed, i)`, so the result does not depend on the thread count.
pub fn monte_carlo<T: Time, F>(
    factory: &F,
    instance: &Instance<T>,
    objective: Objective,
    trials: usize,
    seed: u64,
) -> Result<Expectation, EngineError>
where
    F: AlgorithmFactory<T> + ?Sized,
{
    if trials == 0 {
        return Err(EngineError::Config("trials must be at least 1".into()));
    }
    let costs: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut algorithm = factory.build(trial_rng(seed, i));
            simulate(&mut algorithm, instance).map(|t| objective.of(&t).to_f64())
        })
        .collect::<Result<_, _>>()?;
    let (mean, stderr) = mean_stderr(&costs);
    Ok(Expectation { mean, stderr, trials, exact: false })
}

/// Expected objective: exact when `exact` is set and the support is small
/// enough, otherwise Monte Carlo.
pub fn run_expected<T: Time, F>(
    factory: &F,
    instance: &Instance<T>,
    objective: Objective,
    trials: usize,
    seed: u64,
    exact: bool,
) -> Result<Expectation, EngineError>
where
    F: AlgorithmFactory<T> + ?Sized,
{
    if exact {
        if let Some(value) = exact_expectation(factory, instance, objective)? {
            return Ok(Expectation { mean: value.to_f64(), stderr: 0.0, trials: 1, exact: true });
        }
    }
    monte_carlo(factory, instance, objective, trials, seed)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Executes everything untested in id order, or misbehaves on request.
    struct Scripted {
        script: Vec<Action>,
        pos: usize,
        revealed: Vec<(JobId, f64)>,
    }

    impl Scripted {
        fn new(script: Vec<Action>) -> Self {
            Scripted { script, pos: 0, revealed: Vec::new() }
        }
    }

    impl OnlineAlgorithm<f64> for Scripted {
        fn name(&self) -> String {
            "scripted".into()
        }
        fn init(&mut self, _upper: &[f64]) -> Result<(), EngineError> {
            Ok(())
        }
        fn next_action(&mut self) -> Option<Action> {
            let a = self.script.get(self.pos).copied();
            self.pos += 1;
            a
        }
        fn reveal(&mut self, job: JobId, proc: f64) {
            self.revealed.push((job, proc));
        }
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::<f64>::empty();
        let trace = simulate(&mut Scripted::new(vec![]), &inst).unwrap();
        assert_eq!(*trace.total_completion(), 0.0);
        assert!(trace.steps().is_empty());
    }

    #[test]
    fn reveal_after_test_only() {
        let inst = Instance::from_pairs([(3.0, 1.0), (2.0, 0.5)]);
        let mut alg = Scripted::new(vec![Action::Test(0), Action::ExecuteUntested(1), Action::ExecuteTested(0)]);
        let trace = simulate(&mut alg, &inst).unwrap();
        assert_eq!(alg.revealed, vec![(0, 1.0)]);
        assert_eq!(trace.completion(), &[4.0, 3.0]);
    }

    #[test]
    fn protocol_errors_name_the_action() {
        let inst = Instance::from_pairs([(3.0, 1.0)]);
        let err = simulate(&mut Scripted::new(vec![Action::ExecuteTested(0)]), &inst).unwrap_err();
        assert!(matches!(err, EngineError::Protocol { index: 0, .. }));

        let err = simulate(&mut Scripted::new(vec![Action::Test(0), Action::Test(0)]), &inst).unwrap_err();
        assert!(matches!(err, EngineError::Protocol { index: 1, .. }));

        let err = simulate(&mut Scripted::new(vec![Action::ExecuteUntested(7)]), &inst).unwrap_err();
        assert!(matches!(err, EngineError::Protocol { index: 0, .. }));

        let err = simulate(&mut Scripted::new(vec![Action::Test(0)]), &inst).unwrap_err();
        assert_eq!(err, EngineError::Incomplete { executed: 0, n: 1 });
    }

    struct Liar;

    impl RevealSource<f64> for Liar {
        fn commit(&mut self, _job: JobId, upper: &f64, _touch: Touch) -> f64 {
            upper + 1.0
        }
    }

    #[test]
    fn adversary_cannot_exceed_upper_limit() {
        let mut alg = Scripted::new(vec![Action::Test(0), Action::ExecuteTested(0)]);
        let err = run(&mut alg, &mut Liar, &[2.0]).unwrap_err();
        assert!(matches!(err, EngineError::Adversary { job: 0, .. }));
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
        assert_eq!(trial_seed(5, 9), trial_seed(5, 9));
    }

    #[test]
    fn stderr_of_constant_sample_is_zero() {
        assert_eq!(mean_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, s) = mean_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
    }
}
