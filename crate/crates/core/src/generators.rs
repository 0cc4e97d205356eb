//! Instance families and adversaries.
//!
//! Deterministic algorithms here process tests in id order, so a family's id
//! order is the adversarial touch order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{RevealSource, Touch};
use crate::model::{Instance, JobId};
use crate::num::{max_time, Time};

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{generator}` has no parameter `{key}`")]
    UnknownParameter { generator: String, key: String },
    #[error("generator `{generator}` needs parameter `{key}`")]
    MissingParameter { generator: String, key: String },
    #[error("parameter `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
    #[error("generator `{0}` is randomized and needs a seed")]
    MissingSeed(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GenError> {
    Err(GenError::Invalid(msg.into()))
}

/// `⌊f·n⌋`, robust to `f·n` landing just below an integer.
pub fn count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64 + 1e-9).floor().max(0.0) as usize).min(n)
}

fn fraction_ok(f: f64) -> bool {
    (0.0..=1.0).contains(&f)
}

/// `c` long jobs (`p̄ = p = 2 + ε`), then `b` jobs with `p̄ = p = 2`, then `a`
/// jobs with `p̄ = 2`, `p = 0`.
pub fn threshold_worstcase<T: Time>(a: usize, b: usize, c: usize, epsilon: f64) -> Instance<T> {
    let two = T::from_usize(2);
    let long = two.clone() + T::from_f64(epsilon);
    let mut inst = Instance::empty();
    for _ in 0..c {
        inst.push(long.clone(), long.clone());
    }
    for _ in 0..b {
        inst.push(two.clone(), two.clone());
    }
    for _ in 0..a {
        inst.push(two.clone(), T::zero());
    }
    inst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourTypeProfile {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub epsilon: f64,
}

impl FourTypeProfile {
    pub fn new(n: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        FourTypeProfile { n, alpha, beta, gamma, t: 1.7453, e: 2.8609, epsilon: DEFAULT_EPSILON }
    }

    /// `(type 0, type T, type E, type E+)` counts.
    pub fn counts(&self) -> [usize; 4] {
        crate::analysis::random::type_counts(self.n, self.alpha, self.beta, self.gamma)
    }
}

/// Type 0 (`p̄ = T`, `p = 0`), type T (`p̄ = p = T`), type E (`p̄ = p = E`)
/// and type E+ (`p̄ = p = E + ε`) jobs, in that id order.
pub fn four_type<T: Time>(profile: &FourTypeProfile) -> Result<Instance<T>, GenError> {
    let FourTypeProfile { alpha, beta, gamma, t, e, epsilon, .. } = *profile;
    if !(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 && alpha + beta + gamma <= 1.0 + 1e-12) {
        return invalid(format!("fractions ({alpha}, {beta}, {gamma}) outside the simplex"));
    }
    if !(1.0 <= t && t <= e && epsilon >= 0.0) {
        return invalid(format!("need 1 <= T <= E and ε >= 0, got T={t}, E={e}, ε={epsilon}"));
    }
    let [k0, kt, ke, kp] = profile.counts();
    let (tt, ee) = (T::from_f64(t), T::from_f64(e));
    let ep = ee.clone() + T::from_f64(epsilon);
    let mut inst = Instance::empty();
    (0..k0).for_each(|_| inst.push(tt.clone(), T::zero()));
    (0..kt).for_each(|_| inst.push(tt.clone(), tt.clone()));
    (0..ke).for_each(|_| inst.push(ee.clone(), ee.clone()));
    (0..kp).for_each(|_| inst.push(ep.clone(), ep.clone()));
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetLbProfile {
    pub n: usize,
    pub delta: f64,
    pub p_bar: f64,
}

/// The adaptive adversary against deterministic algorithms. Every job has
/// upper limit `p̄`. The `k`-th job the algorithm touches gets `p = p̄` if it
/// is tested and `k ≤ ⌊δn⌋`, and `p = 0` otherwise.
pub struct DetLbAdversary {
    profile: DetLbProfile,
    touched: usize,
    long_jobs: Vec<JobId>,
    tested_in_window: usize,
}

impl DetLbAdversary {
    pub fn new(profile: DetLbProfile) -> Result<Self, GenError> {
        if !fraction_ok(profile.delta) || profile.p_bar <= 1.0 {
            return invalid(format!("need δ ∈ [0, 1] and p̄ > 1, got {profile:?}"));
        }
        Ok(DetLbAdversary { profile, touched: 0, long_jobs: Vec::new(), tested_in_window: 0 })
    }

    pub fn upper_limits<T: Time>(&self) -> Vec<T> {
        vec![T::from_f64(self.profile.p_bar); self.profile.n]
    }

    pub fn window(&self) -> usize {
        count(self.profile.delta, self.profile.n)
    }

    /// Jobs that received `p = p̄`, in touch order.
    pub fn long_jobs(&self) -> &[JobId] {
        &self.long_jobs
    }

    /// Number of tested jobs among the first `⌊δn⌋` touched.
    pub fn tested_in_window(&self) -> usize {
        self.tested_in_window
    }
}

impl<T: Time> RevealSource<T> for DetLbAdversary {
    fn n(&self) -> Option<usize> {
        Some(self.profile.n)
    }

    fn commit(&mut self, job: JobId, upper: &T, touch: Touch) -> T {
        self.touched += 1;
        let in_window = self.touched <= self.window();
        if in_window && touch == Touch::Test {
            self.tested_in_window += 1;
            self.long_jobs.push(job);
            upper.clone()
        } else {
            T::zero()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandLbProfile {
    pub n: usize,
    pub q: f64,
}

/// `n` jobs with `p̄ = 1/q`; each has `p = 0` with probability `q`, else `p = p̄`.
pub fn rand_lb<T: Time>(profile: &RandLbProfile, seed: u64) -> Result<Instance<T>, GenError> {
    let q = profile.q;
    if !(q > 0.0 && q < 1.0) {
        return invalid(format!("q must lie in (0, 1), got {q}"));
    }
    let upper = T::one() / T::from_f64(q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Instance::from_pairs((0..profile.n).map(|_| {
        let p = if rng.gen::<f64>() < q { T::zero() } else { upper.clone() };
        (upper.clone(), p)
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeUniformProfile {
    pub n: usize,
    pub p_bar: f64,
    /// Fraction of jobs with `p = 0`.
    pub gamma: f64,
}

/// `⌊(1 − γ)n⌋` jobs with `p = p̄` first, then jobs with `p = 0`.
pub fn extreme_uniform<T: Time>(profile: &ExtremeUniformProfile) -> Result<Instance<T>, GenError> {
    if !fraction_ok(profile.gamma) || profile.p_bar < 0.0 {
        return invalid(format!("need γ ∈ [0, 1] and p̄ >= 0, got {profile:?}"));
    }
    let long = count(1.0 - profile.gamma, profile.n);
    let p_bar = T::from_f64(profile.p_bar);
    Ok(Instance::from_pairs(
        (0..profile.n).map(|i| (p_bar.clone(), if i < long { p_bar.clone() } else { T::zero() })),
    ))
}

/// Uniform upper limit `p̄ ≥ 1` with `E = max{1, p̄ − 1}`: `⌊λn⌋` jobs with
/// `p = p̄`, optionally one job with `p = middle`, then a `δ` fraction of the
/// remaining jobs with `p = E` and the rest with `p = 0`. Ids follow
/// decreasing `p`.
pub fn uniform_mixed<T: Time>(
    n: usize,
    p_bar: f64,
    lambda: f64,
    delta: f64,
    middle: Option<f64>,
) -> Result<Instance<T>, GenError> {
    if p_bar < 1.0 || !fraction_ok(lambda) || !fraction_ok(delta) {
        return invalid(format!("need p̄ >= 1 and λ, δ ∈ [0, 1], got p̄={p_bar}, λ={lambda}, δ={delta}"));
    }
    let e = (p_bar - 1.0).max(1.0);
    if let Some(m) = middle {
        if !(m > e && m < p_bar) {
            return invalid(format!("middle job needs E < p < p̄, got {m} with E={e}, p̄={p_bar}"));
        }
    }
    let long = count(lambda, n);
    let mid = usize::from(middle.is_some() && long < n);
    let short = n - long - mid;
    let at_e = count(delta, short);
    let u = T::from_f64(p_bar);
    let mut inst = Instance::empty();
    (0..long).for_each(|_| inst.push(u.clone(), u.clone()));
    if mid == 1 {
        inst.push(u.clone(), T::from_f64(middle.expect("checked")));
    }
    let e_t = max_time(T::one(), u.clone() - T::one());
    (0..at_e).for_each(|_| inst.push(u.clone(), e_t.clone()));
    (0..short - at_e).for_each(|_| inst.push(u.clone(), T::zero()));
    Ok(inst)
}

/// Uniform upper limit `p̄ ≥ 2`: `γ = 1 − α − β` fraction with `p = p̄` first,
/// then a `β` fraction with `p = 2`, then an `α` fraction with `p = 0`.
pub fn threshold_uniform<T: Time>(n: usize, p_bar: f64, alpha: f64, beta: f64) -> Result<Instance<T>, GenError> {
    if p_bar < 2.0 || !(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + 1e-12) {
        return invalid(format!("need p̄ >= 2 and α, β >= 0 with α + β <= 1, got p̄={p_bar}, α={alpha}, β={beta}"));
    }
    let (ka, kb) = (count(alpha, n), count(beta, n));
    let kg = n.saturating_sub(ka + kb);
    let u = T::from_f64(p_bar);
    let two = T::from_usize(2);
    let mut inst = Instance::empty();
    (0..kg).for_each(|_| inst.push(u.clone(), u.clone()));
    (0..kb).for_each(|_| inst.push(u.clone(), two.clone()));
    (0..ka).for_each(|_| inst.push(u.clone(), T::zero()));
    Ok(inst)
}

pub fn single<T: Time>(upper: f64, proc: f64) -> Result<Instance<T>, GenError> {
    if !(0.0 <= proc && proc <= upper) {
        return invalid(format!("need 0 <= p <= p̄, got p={proc}, p̄={upper}"));
    }
    Ok(Instance::from_pairs([(T::from_f64(upper), T::from_f64(proc))]))
}

/// Random instance with mixed upper limits. Limits and processing times are
/// multiples of `1/4` up to `max_upper`, with extra weight on `p = 0` and
/// `p = p̄`, so rational arithmetic stays cheap.
pub fn random_instance<T: Time>(n: usize, max_upper: f64, seed: u64) -> Instance<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = (max_upper * 4.0).round().max(1.0) as u32;
    Instance::from_pairs((0..n).map(|_| {
        let u = rng.gen_range(0..=steps);
        let p = match rng.gen_range(0..4) {
            0 => 0,
            1 => u,
            _ => rng.gen_range(0..=u),
        };
        (T::from_f64(u as f64 / 4.0), T::from_f64(p as f64 / 4.0))
    }))
}

/// Generator names accepted by [`generate`].
pub const GENERATORS: &[&str] = &[
    "threshold_worstcase",
    "four_type",
    "rand_lb",
    "extreme_uniform",
    "uniform_mixed",
    "threshold_uniform",
    "single",
    "random",
];

struct Params<'a> {
    generator: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn get(&self, key: &str) -> Result<Option<f64>, GenError> {
        self.map
            .get(key)
            .map(|v| {
                <f64 as Time>::parse(v).ok_or_else(|| GenError::BadValue { key: key.into(), value: v.clone() })
            })
            .transpose()
    }

    fn or(&self, key: &str, default: f64) -> Result<f64, GenError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn req(&self, key: &str) -> Result<f64, GenError> {
        self.get(key)?.ok_or_else(|| GenError::MissingParameter { generator: self.generator.into(), key: key.into() })
    }

    fn count(&self, key: &str) -> Result<usize, GenError> {
        let x = self.req(key)?;
        if x < 0.0 || x.fract() != 0.0 {
            return Err(GenError::BadValue { key: key.into(), value: self.map[key].clone() });
        }
        Ok(x as usize)
    }

    fn only(&self, allowed: &[&str]) -> Result<(), GenError> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(GenError::UnknownParameter { generator: self.generator.into(), key: k.clone() }),
            None => Ok(()),
        }
    }
}

/// Builds an instance by generator name and `key = value` parameters.
pub fn generate<T: Time>(
    name: &str,
    params: &BTreeMap<String, String>,
    seed: Option<u64>,
) -> Result<Instance<T>, GenError> {
    let p = Params { generator: name, map: params };
    match name {
        "threshold_worstcase" => {
            p.only(&["a", "b", "c", "epsilon"])?;
            Ok(threshold_worstcase(p.count("a")?, p.count("b")?, p.count("c")?, p.or("epsilon", DEFAULT_EPSILON)?))
        }
        "four_type" => {
            p.only(&["n", "alpha", "beta", "gamma", "T", "E", "epsilon"])?;
            let mut profile = FourTypeProfile::new(p.count("n")?, p.or("alpha", 0.0)?, p.or("beta", 0.0)?, p.or("gamma", 0.0)?);
            profile.t = p.or("T", profile.t)?;
            profile.e = p.or("E", profile.e)?;
            profile.epsilon = p.or("epsilon", profile.epsilon)?;
            four_type(&profile)
        }
        "rand_lb" => {
            p.only(&["n", "q"])?;
            let seed = seed.ok_or_else(|| GenError::MissingSeed(name.into()))?;
            let q = p.or("q", crate::analysis::random::rand_lb_q_star())?;
            rand_lb(&RandLbProfile { n: p.count("n")?, q }, seed)
        }
        "extreme_uniform" => {
            p.only(&["n", "p_bar", "gamma"])?;
            extreme_uniform(&ExtremeUniformProfile { n: p.count("n")?, p_bar: p.req("p_bar")?, gamma: p.req("gamma")? })
        }
        "uniform_mixed" => {
            p.only(&["n", "p_bar", "lambda", "delta", "middle"])?;
            uniform_mixed(p.count("n")?, p.req("p_bar")?, p.req("lambda")?, p.or("delta", 0.0)?, p.get("middle")?)
        }
        "threshold_uniform" => {
            p.only(&["n", "p_bar", "alpha", "beta"])?;
            threshold_uniform(p.count("n")?, p.req("p_bar")?, p.req("alpha")?, p.req("beta")?)
        }
        "single" => {
            p.only(&["upper", "proc"])?;
            single(p.req("upper")?, p.req("proc")?)
        }
        "random" => {
            p.only(&["n", "max_upper"])?;
            let seed = seed.ok_or_else(|| GenError::MissingSeed(name.into()))?;
            Ok(random_instance(p.count("n")?, p.or("max_upper", 5.0)?, seed))
        }
        other => Err(GenError::UnknownGenerator(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;
    use crate::num::Rational;

    #[test]
    fn threshold_family_layout() {
        let inst: Instance<f64> = threshold_worstcase(1, 1, 1, 1e-6);
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.job(0).proc, 2.0 + 1e-6);
        assert_eq!((inst.job(1).upper, inst.job(1).proc), (2.0, 2.0));
        assert_eq!((inst.job(2).upper, inst.job(2).proc), (2.0, 0.0));
    }

    #[test]
    fn four_type_counts() {
        let inst: Instance<f64> = four_type(&FourTypeProfile::new(4, 0.25, 0.25, 0.25)).unwrap();
        let procs = inst.processing_times();
        assert_eq!(procs[0], 0.0);
        assert_eq!(procs[1], 1.7453);
        assert_eq!(procs[2], 2.8609);
        assert_eq!(procs[3], 2.8609 + 1e-6);
        assert!(four_type::<f64>(&FourTypeProfile::new(4, 0.5, 0.5, 0.5)).is_err());
        assert_eq!(FourTypeProfile::new(10, 0.3, 0.3, 0.3).counts(), [1, 3, 3, 3]);
    }

    #[test]
    fn extreme_layout() {
        let inst: Instance<f64> = extreme_uniform(&ExtremeUniformProfile { n: 10, p_bar: 2.0, gamma: 0.5 }).unwrap();
        assert_eq!(inst.processing_times(), vec![2.0, 2.0, 2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let zeros: Instance<f64> = extreme_uniform(&ExtremeUniformProfile { n: 4, p_bar: 2.0, gamma: 1.0 }).unwrap();
        assert!(zeros.processing_times().iter().all(|p| *p == 0.0));
    }

    #[test]
    fn mixed_layout() {
        let inst: Instance<Rational> = uniform_mixed(10, 2.5, 0.3, 0.5, Some(2.0)).unwrap();
        let p: Vec<f64> = inst.processing_times().iter().map(Time::to_f64).collect();
        assert_eq!(p, vec![2.5, 2.5, 2.5, 2.0, 1.5, 1.5, 1.5, 0.0, 0.0, 0.0]);
        assert!(uniform_mixed::<f64>(10, 2.5, 0.3, 0.5, Some(1.0)).is_err());
        let all_long: Instance<f64> = uniform_mixed(5, 2.0, 1.0, 0.0, None).unwrap();
        assert!(all_long.processing_times().iter().all(|p| *p == 2.0));
    }

    #[test]
    fn rand_lb_is_seeded() {
        let profile = RandLbProfile { n: 50, q: 0.4 };
        let a: Instance<f64> = rand_lb(&profile, 7).unwrap();
        assert_eq!(a, rand_lb(&profile, 7).unwrap());
        assert_ne!(a, rand_lb(&profile, 8).unwrap());
        assert!(a.jobs().iter().all(|j| j.upper == 2.5 && (j.proc == 0.0 || j.proc == 2.5)));
    }

    #[test]
    fn adversary_rule() {
        let mut adv = DetLbAdversary::new(DetLbProfile { n: 4, delta: 0.5, p_bar: 2.0 }).unwrap();
        let u = 2.0f64;
        assert_eq!(adv.commit(3, &u, Touch::ExecuteUntested), 0.0);
        assert_eq!(adv.commit(1, &u, Touch::Test), 2.0);
        assert_eq!(adv.commit(0, &u, Touch::Test), 0.0);
        assert_eq!(adv.long_jobs(), &[1]);
        assert_eq!(adv.tested_in_window(), 1);
    }

    #[test]
    fn named_generators() {
        let params = |pairs: &[(&str, &str)]| -> BTreeMap<String, String> {
            pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
        };
        let inst: Instance<f64> = generate("threshold_worstcase", &params(&[("a", "1"), ("b", "1"), ("c", "1")]), None).unwrap();
        assert_eq!(inst.n(), 3);
        assert!(matches!(generate::<f64>("nope", &params(&[]), None), Err(GenError::UnknownGenerator(_))));
        assert!(matches!(
            generate::<f64>("single", &params(&[("upper", "2")]), None),
            Err(GenError::MissingParameter { .. })
        ));
        assert!(matches!(generate::<f64>("random", &params(&[("n", "3")]), None), Err(GenError::MissingSeed(_))));
        assert!(matches!(
            generate::<f64>("single", &params(&[("upper", "2"), ("proc", "1"), ("x", "1")]), None),
            Err(GenError::UnknownParameter { .. })
        ));
        for seed in 0..20 {
            let inst: Instance<Rational> = generate("random", &params(&[("n", "12")]), Some(seed)).unwrap();
            assert!(validate_instance(&inst).is_empty());
        }
    }
}
