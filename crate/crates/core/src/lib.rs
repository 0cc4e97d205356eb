//! Single-machine scheduling with testing.
//!
//! Every job has a known upper limit `p̄` and a hidden processing time `p`.
//! A unit-time test reveals `p` and lets the job run in time `p`; an untested
//! job runs in time `p̄`. This crate provides the online algorithms, an engine
//! that enforces the information model, exact offline optima, adversarial
//! instance families and the closed-form analysis of competitive ratios.

pub mod algorithms;
pub mod analysis;
pub mod engine;
pub mod generators;
pub mod model;
pub mod num;
pub mod offline;

pub use model::{
    Action, Instance, Job, JobId, Objective, RatioReport, Step, Trace, TraceError, Violation,
};
pub use algorithms::{AlgorithmSpec, SpecError};
pub use engine::{run, run_expected, simulate, AlgorithmFactory, EngineError, Expectation, OnlineAlgorithm, RevealSource, Run, StaticSource, Touch};
pub use generators::GenError;
pub use num::{NumericMode, Rational, Time};
pub use offline::{brute_force_optimum, optimal, optimal_makespan, optimal_sum, OfflineError, OptPlan};
