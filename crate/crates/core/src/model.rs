//! Jobs, instances, schedules and their cost.
//!
//! A schedule is a [`Trace`]: a gap-free sequence of actions starting at
//! time 0. A test takes one unit of time, an execution after a test takes the
//! job's processing time and an untested execution takes its upper limit.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{max_time, Time};

pub type JobId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Job<T> {
    pub id: JobId,
    /// Time taken when executed without a test.
    pub upper: T,
    /// Time taken when executed after a test. Hidden from online algorithms.
    pub proc: T,
    /// Accepted for input compatibility; no algorithm uses it.
    pub lower: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance<T> {
    jobs: Vec<Job<T>>,
}

impl<T: Time> Instance<T> {
    /// Builds an instance from `(upper, proc)` pairs; ids follow the order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let jobs = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (upper, proc))| Job { id, upper, proc, lower: T::zero() })
            .collect();
        Instance { jobs }
    }

    /// Builds an instance from full job records, renumbering ids by position.
    pub fn from_jobs(jobs: impl IntoIterator<Item = Job<T>>) -> Self {
        let jobs = jobs.into_iter().enumerate().map(|(id, job)| Job { id, ..job }).collect();
        Instance { jobs }
    }

    pub fn empty() -> Self {
        Instance { jobs: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn jobs(&self) -> &[Job<T>] {
        &self.jobs
    }

    pub fn job(&self, id: JobId) -> &Job<T> {
        &self.jobs[id]
    }

    pub fn upper_limits(&self) -> Vec<T> {
        self.jobs.iter().map(|j| j.upper.clone()).collect()
    }

    pub fn processing_times(&self) -> Vec<T> {
        self.jobs.iter().map(|j| j.proc.clone()).collect()
    }

    /// Same instance in another numeric mode.
    pub fn convert<U: Time>(&self) -> Instance<U> {
        Instance {
            jobs: self
                .jobs
                .iter()
                .map(|j| Job {
                    id: j.id,
                    upper: U::from_f64(j.upper.to_f64()),
                    proc: U::from_f64(j.proc.to_f64()),
                    lower: U::from_f64(j.lower.to_f64()),
                })
                .collect(),
        }
    }

    /// Returns the jobs permuted so that new job `k` is old job `order[k]`.
    pub fn permuted(&self, order: &[JobId]) -> Self {
        Instance::from_jobs(order.iter().map(|&id| self.jobs[id].clone()))
    }

    pub fn push(&mut self, upper: T, proc: T) {
        let id = self.jobs.len();
        self.jobs.push(Job { id, upper, proc, lower: T::zero() });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub job: Option<JobId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.job {
            Some(id) => write!(f, "job {id}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Lists every broken job or instance invariant; empty means valid.
pub fn validate_instance<T: Time>(instance: &Instance<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut report = |job: Option<JobId>, message: &str| {
        out.push(Violation { job, message: message.to_string() })
    };
    for (pos, job) in instance.jobs.iter().enumerate() {
        let id = Some(job.id);
        if job.id != pos {
            report(Some(pos), "job id does not match its position");
        }
        if job.upper.is_negative() {
            report(id, "upper_limit < 0");
        }
        if job.proc.is_negative() {
            report(id, "processing_time < 0");
        }
        if job.lower.is_negative() {
            report(id, "lower_limit < 0");
        }
        if job.proc > job.upper {
            report(id, "processing_time > upper_limit");
        }
        if job.lower > job.proc {
            report(id, "lower_limit > processing_time");
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Test(JobId),
    ExecuteTested(JobId),
    ExecuteUntested(JobId),
}

impl Action {
    pub fn job(&self) -> JobId {
        match *self {
            Action::Test(j) | Action::ExecuteTested(j) | Action::ExecuteUntested(j) => j,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Action::Test(_) => "test",
            Action::ExecuteTested(_) => "exec_tested",
            Action::ExecuteUntested(_) => "exec_untested",
        }
    }

    pub fn from_kind(kind: &str, job: JobId) -> Option<Self> {
        match kind {
            "test" => Some(Action::Test(job)),
            "exec_tested" => Some(Action::ExecuteTested(job)),
            "exec_untested" => Some(Action::ExecuteUntested(job)),
            _ => None,
        }
    }

    pub fn is_execution(&self) -> bool {
        !matches!(self, Action::Test(_))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind(), self.job())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    pub action: Action,
    pub start: T,
    pub duration: T,
}

impl<T: Time> Step<T> {
    pub fn end(&self) -> T {
        self.start.clone() + self.duration.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("action {index}: starts at {found}, expected {expected} (gap or overlap)")]
    NotContiguous { index: usize, expected: f64, found: f64 },
    #[error("action {index}: negative duration")]
    NegativeDuration { index: usize },
    #[error("action {index}: job {job} is out of range")]
    UnknownJob { index: usize, job: JobId },
    #[error("action {index}: job {job} executed twice")]
    DuplicateExecution { index: usize, job: JobId },
    #[error("action {index}: job {job} tested twice")]
    DuplicateTest { index: usize, job: JobId },
    #[error("action {index}: job {job} tested after its execution")]
    TestAfterExecution { index: usize, job: JobId },
    #[error("action {index}: job {job} executed as tested before its test")]
    ExecuteBeforeTest { index: usize, job: JobId },
    #[error("action {index}: job {job} executed untested after being tested")]
    UntestedAfterTest { index: usize, job: JobId },
    #[error("action {index}: test of job {job} does not take exactly one time unit")]
    TestDuration { index: usize, job: JobId },
    #[error("action {index}: duration of {action} does not match the instance")]
    DurationMismatch { index: usize, action: Action },
    #[error("job {job} is never executed")]
    Unfinished { job: JobId },
    #[error("trace covers {found} jobs, instance has {expected}")]
    JobCount { expected: usize, found: usize },
    #[error("stored aggregates disagree with the action list")]
    AggregateMismatch,
}

/// A complete, validated schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<T> {
    n: usize,
    steps: Vec<Step<T>>,
    completion: Vec<T>,
    total_completion: T,
    makespan: T,
    length: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum JobState {
    Fresh,
    Tested,
    Done,
}

/// Per-job bookkeeping shared by the trace builder and the validator.
#[derive(Clone, Debug)]
pub(crate) struct Ledger<T> {
    state: Vec<JobState>,
    completion: Vec<Option<T>>,
    clock: T,
    executed: usize,
}

impl<T: Time> Ledger<T> {
    pub(crate) fn new(n: usize) -> Self {
        Ledger { state: vec![JobState::Fresh; n], completion: vec![None; n], clock: T::zero(), executed: 0 }
    }

    pub(crate) fn clock(&self) -> &T {
        &self.clock
    }

    pub(crate) fn executed(&self) -> usize {
        self.executed
    }

    /// Checks that `action` is legal now, without changing anything.
    pub(crate) fn check(&self, index: usize, action: Action) -> Result<(), TraceError> {
        let job = action.job();
        let Some(&state) = self.state.get(job) else {
            return Err(TraceError::UnknownJob { index, job });
        };
        match (action, state) {
            (_, JobState::Done) if action.is_execution() => {
                Err(TraceError::DuplicateExecution { index, job })
            }
            (Action::Test(_), JobState::Done) => Err(TraceError::TestAfterExecution { index, job }),
            (Action::Test(_), JobState::Tested) => Err(TraceError::DuplicateTest { index, job }),
            (Action::ExecuteTested(_), JobState::Fresh) => {
                Err(TraceError::ExecuteBeforeTest { index, job })
            }
            (Action::ExecuteUntested(_), JobState::Tested) => {
                Err(TraceError::UntestedAfterTest { index, job })
            }
            _ => Ok(()),
        }
    }

    /// Applies a checked action of the given duration and returns its start.
    pub(crate) fn apply(&mut self, action: Action, duration: T) -> T {
        let start = self.clock.clone();
        self.clock += duration;
        let job = action.job();
        match action {
            Action::Test(_) => self.state[job] = JobState::Tested,
            Action::ExecuteTested(_) | Action::ExecuteUntested(_) => {
                self.state[job] = JobState::Done;
                self.completion[job] = Some(self.clock.clone());
                self.executed += 1;
            }
        }
        start
    }

    pub(crate) fn finish(self, steps: Vec<Step<T>>) -> Result<Trace<T>, TraceError> {
        let n = self.state.len();
        let mut completion = Vec::with_capacity(n);
        for (job, c) in self.completion.into_iter().enumerate() {
            completion.push(c.ok_or(TraceError::Unfinished { job })?);
        }
        let total_completion = completion.iter().cloned().sum();
        let makespan = completion.iter().cloned().fold(T::zero(), max_time);
        Ok(Trace { n, steps, completion, total_completion, makespan, length: self.clock })
    }
}

impl<T: Time> Trace<T> {
    /// Validates an action list for `n` jobs and computes completion times.
    pub fn from_steps(n: usize, steps: Vec<Step<T>>) -> Result<Self, TraceError> {
        let mut ledger = Ledger::new(n);
        for (index, step) in steps.iter().enumerate() {
            if step.start != *ledger.clock() {
                return Err(TraceError::NotContiguous {
                    index,
                    expected: ledger.clock().to_f64(),
                    found: step.start.to_f64(),
                });
            }
            if step.duration.is_negative() {
                return Err(TraceError::NegativeDuration { index });
            }
            ledger.check(index, step.action)?;
            if matches!(step.action, Action::Test(_)) && step.duration != T::one() {
                return Err(TraceError::TestDuration { index, job: step.action.job() });
            }
            ledger.apply(step.action, step.duration.clone());
        }
        ledger.finish(steps)
    }

    /// Builds a trace from actions alone, taking durations from `instance`.
    pub fn from_actions(instance: &Instance<T>, actions: &[Action]) -> Result<Self, TraceError> {
        let mut ledger = Ledger::new(instance.n());
        let mut steps = Vec::with_capacity(actions.len());
        for (index, &action) in actions.iter().enumerate() {
            ledger.check(index, action)?;
            let duration = action_duration(instance, action);
            let start = ledger.apply(action, duration.clone());
            steps.push(Step { action, start, duration });
        }
        ledger.finish(steps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step<T>] {
        &self.steps
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        self.steps.iter().map(|s| s.action)
    }

    pub fn completion(&self) -> &[T] {
        &self.completion
    }

    pub fn total_completion(&self) -> &T {
        &self.total_completion
    }

    pub fn makespan(&self) -> &T {
        &self.makespan
    }

    pub fn length(&self) -> &T {
        &self.length
    }

    pub fn tested(&self) -> Vec<bool> {
        let mut tested = vec![false; self.n];
        for a in self.actions() {
            if let Action::Test(j) = a {
                tested[j] = true;
            }
        }
        tested
    }

    /// Checks every step's duration against `instance` (test = 1, tested
    /// execution = processing time, untested execution = upper limit).
    pub fn verify_against(&self, instance: &Instance<T>) -> Result<(), TraceError> {
        if instance.n() != self.n {
            return Err(TraceError::JobCount { expected: instance.n(), found: self.n });
        }
        for (index, step) in self.steps.iter().enumerate() {
            if step.duration != action_duration(instance, step.action) {
                return Err(TraceError::DurationMismatch { index, action: step.action });
            }
        }
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for step in &self.steps {
            let record = StepRecord {
                t: step.start.to_f64(),
                kind: step.action.kind().to_string(),
                job: step.action.job(),
                dur: step.duration.to_f64(),
            };
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn action_duration<T: Time>(instance: &Instance<T>, action: Action) -> T {
    let job = instance.job(action.job());
    match action {
        Action::Test(_) => T::one(),
        Action::ExecuteTested(_) => job.proc.clone(),
        Action::ExecuteUntested(_) => job.upper.clone(),
    }
}

/// Recomputes `(Σ C_j, max C_j)` from the action list and checks the stored
/// aggregates against it.
pub fn cost_of_trace<T: Time>(trace: &Trace<T>) -> Result<(T, T), TraceError> {
    let replayed = Trace::from_steps(trace.n, trace.steps.clone())?;
    if replayed.total_completion != trace.total_completion
        || replayed.makespan != trace.makespan
        || replayed.completion != trace.completion
    {
        return Err(TraceError::AggregateMismatch);
    }
    Ok((replayed.total_completion, replayed.makespan))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Sum,
    Makespan,
}

impl Objective {
    pub fn of<T: Time>(&self, trace: &Trace<T>) -> T {
        match self {
            Objective::Sum => trace.total_completion().clone(),
            Objective::Makespan => trace.makespan().clone(),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Objective::Sum),
            "makespan" => Ok(Objective::Makespan),
            other => Err(format!("unknown objective `{other}` (expected sum|makespan)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub trials: usize,
    pub stderr: f64,
}

impl RatioReport {
    pub fn new(alg_cost: f64, opt_cost: f64, trials: usize, stderr: f64) -> Self {
        RatioReport { alg_cost, opt_cost, ratio: ratio(alg_cost, opt_cost), trials, stderr }
    }

    pub fn deterministic(alg_cost: f64, opt_cost: f64) -> Self {
        Self::new(alg_cost, opt_cost, 1, 0.0)
    }
}

/// `alg / opt`, with the empty schedule (`0 / 0`) counting as ratio 1.
pub fn ratio(alg: f64, opt: f64) -> f64 {
    if opt == 0.0 && alg == 0.0 {
        1.0
    } else {
        alg / opt
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: unknown action kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub upper: f64,
    pub proc: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub kind: String,
    pub job: JobId,
    pub dur: f64,
}

pub fn instance_from_json<T: Time>(text: &str) -> Result<Instance<T>, FormatError> {
    let records: Vec<JobRecord> = serde_json::from_str(text)?;
    Ok(Instance::from_jobs(records.into_iter().map(|r| Job {
        id: 0,
        upper: T::from_f64(r.upper),
        proc: T::from_f64(r.proc),
        lower: T::from_f64(r.lower.unwrap_or(0.0)),
    })))
}

pub fn instance_to_json<T: Time>(instance: &Instance<T>) -> String {
    let records: Vec<JobRecord> = instance
        .jobs()
        .iter()
        .map(|j| JobRecord {
            upper: j.upper.to_f64(),
            proc: j.proc.to_f64(),
            lower: (!j.lower.is_zero()).then(|| j.lower.to_f64()),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("job records serialize")
}

/// Reads a JSON-lines trace for `n` jobs.
pub fn trace_from_jsonl<T: Time, R: BufRead>(input: R, n: usize) -> Result<Trace<T>, FormatError> {
    let mut steps = Vec::new();
    for (line_no, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: StepRecord = serde_json::from_str(&line)?;
        let action = Action::from_kind(&record.kind, record.job)
            .ok_or(FormatError::UnknownKind { line: line_no + 1, kind: record.kind.clone() })?;
        steps.push(Step { action, start: T::from_f64(record.t), duration: T::from_f64(record.dur) });
    }
    Ok(Trace::from_steps(n, steps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;

    fn r(x: f64) -> Rational {
        Rational::from_f64(x)
    }

    #[test]
    fn valid_single_job() {
        let inst = Instance::from_pairs([(r(2.0), r(0.0))]);
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn proc_above_upper() {
        let inst = Instance::from_pairs([(r(2.0), r(3.0))]);
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "processing_time > upper_limit");
    }

    #[test]
    fn lower_above_proc() {
        let inst = Instance::from_jobs([Job { id: 0, upper: r(2.0), proc: r(0.5), lower: r(1.0) }]);
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "lower_limit > processing_time");
    }

    /// Block accounting from the cost example: long tests, short test+exec
    /// pairs, then long executions; n = 10, α = 0.5, p̄ = 1.
    #[test]
    fn block_accounting_example() {
        let n = 10;
        let short = 5;
        let mut inst = Instance::empty();
        for _ in 0..n - short {
            inst.push(r(1.0), r(1.0));
        }
        for _ in 0..short {
            inst.push(r(1.0), r(0.0));
        }
        let mut actions: Vec<Action> = (0..5).map(Action::Test).collect();
        for j in 5..10 {
            actions.push(Action::Test(j));
            actions.push(Action::ExecuteTested(j));
        }
        actions.extend((0..5).map(Action::ExecuteTested));
        let trace = Trace::from_actions(&inst, &actions).unwrap();
        // (1−α)n² + αn(αn+1)/2 + αn(1−α)n + (1−α)n((1−α)n+1)/2·p̄
        let (a, nf) = (0.5, 10.0);
        let formula = (1.0 - a) * nf * nf
            + a * nf * (a * nf + 1.0) / 2.0
            + a * nf * (1.0 - a) * nf
            + (1.0 - a) * nf * ((1.0 - a) * nf + 1.0) / 2.0;
        assert_eq!(formula, 105.0);
        assert_eq!(*trace.total_completion(), r(105.0));
        let (total, makespan) = cost_of_trace(&trace).unwrap();
        assert_eq!(total, r(105.0));
        assert_eq!(makespan, r(15.0));
    }

    #[test]
    fn single_untested_job() {
        let inst = Instance::from_pairs([(r(3.0), r(1.0))]);
        let trace = Trace::from_actions(&inst, &[Action::ExecuteUntested(0)]).unwrap();
        assert_eq!(cost_of_trace(&trace).unwrap(), (r(3.0), r(3.0)));
    }

    #[test]
    fn test_then_execute() {
        let inst = Instance::from_pairs([(r(4.0), r(2.0))]);
        let trace = Trace::from_actions(&inst, &[Action::Test(0), Action::ExecuteTested(0)]).unwrap();
        assert_eq!(cost_of_trace(&trace).unwrap(), (r(3.0), r(3.0)));
        assert_eq!(trace.completion(), &[r(3.0)]);
    }

    #[test]
    fn structural_errors_name_first_offender() {
        let step = |action, start: f64, dur: f64| Step { action, start: r(start), duration: r(dur) };
        let gap = vec![step(Action::ExecuteUntested(0), 0.0, 1.0), step(Action::ExecuteUntested(1), 2.0, 1.0)];
        assert!(matches!(Trace::from_steps(2, gap), Err(TraceError::NotContiguous { index: 1, .. })));

        let dup = vec![step(Action::ExecuteUntested(0), 0.0, 1.0), step(Action::ExecuteUntested(0), 1.0, 1.0)];
        assert!(matches!(Trace::from_steps(1, dup), Err(TraceError::DuplicateExecution { index: 1, job: 0 })));

        let early = vec![step(Action::ExecuteTested(0), 0.0, 1.0)];
        assert!(matches!(Trace::from_steps(1, early), Err(TraceError::ExecuteBeforeTest { index: 0, .. })));

        let untested_after = vec![step(Action::Test(0), 0.0, 1.0), step(Action::ExecuteUntested(0), 1.0, 2.0)];
        assert!(matches!(
            Trace::from_steps(1, untested_after),
            Err(TraceError::UntestedAfterTest { index: 1, .. })
        ));

        let long_test = vec![step(Action::Test(0), 0.0, 2.0)];
        assert!(matches!(Trace::from_steps(1, long_test), Err(TraceError::TestDuration { .. })));

        let unfinished = vec![step(Action::Test(0), 0.0, 1.0)];
        assert!(matches!(Trace::from_steps(1, unfinished), Err(TraceError::Unfinished { job: 0 })));

        let unknown = vec![step(Action::ExecuteUntested(3), 0.0, 1.0)];
        assert!(matches!(Trace::from_steps(1, unknown), Err(TraceError::UnknownJob { index: 0, job: 3 })));
    }

    #[test]
    fn zero_length_execution_completes_at_clock() {
        let inst = Instance::from_pairs([(r(2.0), r(0.0))]);
        let trace = Trace::from_actions(&inst, &[Action::Test(0), Action::ExecuteTested(0)]).unwrap();
        assert_eq!(trace.completion(), &[r(1.0)]);
        assert_eq!(trace.steps()[1].start, r(1.0));
        assert_eq!(trace.steps()[1].duration, r(0.0));
    }

    #[test]
    fn verify_against_detects_wrong_duration() {
        let inst = Instance::from_pairs([(r(3.0), r(1.0))]);
        let steps = vec![Step { action: Action::ExecuteUntested(0), start: r(0.0), duration: r(1.0) }];
        let trace = Trace::from_steps(1, steps).unwrap();
        assert!(matches!(trace.verify_against(&inst), Err(TraceError::DurationMismatch { index: 0, .. })));
    }

    #[test]
    fn json_formats() {
        let inst: Instance<f64> =
            instance_from_json(r#"[{"upper": 2, "proc": 0.5}, {"upper": 3, "proc": 1, "lower": 0.5}]"#).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.job(1).lower, 0.5);
        let back: Instance<f64> = instance_from_json(&instance_to_json(&inst)).unwrap();
        assert_eq!(back, inst);

        let trace = Trace::from_actions(&inst, &[Action::Test(0), Action::ExecuteTested(0), Action::ExecuteUntested(1)])
            .unwrap();
        let mut buf = Vec::new();
        trace.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), r#"{"t":0.0,"kind":"test","job":0,"dur":1.0}"#);
        let parsed: Trace<f64> = trace_from_jsonl(&buf[..], 2).unwrap();
        assert_eq!(parsed, trace);
    }

    #[test]
    fn ratio_of_empty_schedule() {
        assert_eq!(ratio(0.0, 0.0), 1.0);
        assert_eq!(RatioReport::deterministic(3.0, 2.0).ratio, 1.5);
    }
}
