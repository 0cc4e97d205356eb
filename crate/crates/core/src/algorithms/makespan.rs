use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{plan_algorithm, Plan};
use crate::engine::{EngineError, OnlineAlgorithm};
use crate::model::JobId;
use crate::num::Time;

/// Largest number of coin flips whose outcomes are enumerated exactly.
pub const EXACT_MAX_FLIPS: usize = 16;

/// Tests job `j` iff `p̄_j > φ`, executing every tested job at once.
pub struct MakespanDet<T> {
    plan: Option<Plan<T>>,
}

impl<T: Time> MakespanDet<T> {
    pub fn new() -> Self {
        MakespanDet { plan: None }
    }

    fn label(&self) -> String {
        "makespan_det".into()
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let phi = T::from_f64(crate::analysis::makespan::PHI);
        let test: Vec<bool> = upper.iter().map(|u| *u > phi).collect();
        Ok(per_job(test))
    }
}

impl<T: Time> Default for MakespanDet<T> {
    fn default() -> Self {
        Self::new()
    }
}

plan_algorithm!(MakespanDet);

/// Probability that the randomized makespan algorithm tests a job with
/// upper limit `p̄`: 0 if `p̄ ≤ 1`, else `1 − 1/(p̄² − p̄ + 1)`.
pub fn test_probability<T: Time>(p_bar: &T) -> T {
    if *p_bar <= T::one() {
        return T::zero();
    }
    let u = p_bar.clone();
    T::one() - T::one() / (u.clone() * u.clone() - u + T::one())
}

/// Tests each job independently with [`test_probability`].
pub struct MakespanRand<T> {
    rng: Option<ChaCha8Rng>,
    decisions: Option<Vec<bool>>,
    plan: Option<Plan<T>>,
}

impl<T: Time> MakespanRand<T> {
    pub fn new(rng: ChaCha8Rng) -> Self {
        MakespanRand { rng: Some(rng), decisions: None, plan: None }
    }

    /// The algorithm with its coin flips fixed.
    pub fn with_decisions(decisions: Vec<bool>) -> Self {
        MakespanRand { rng: None, decisions: Some(decisions), plan: None }
    }

    fn label(&self) -> String {
        "makespan_rand".into()
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let test = match &self.decisions {
            Some(d) if d.len() == upper.len() => d.clone(),
            Some(d) => {
                return Err(EngineError::Config(format!("{} fixed decisions for {} jobs", d.len(), upper.len())))
            }
            None => {
                let mut rng = self.rng.clone().expect("seeded");
                upper
                    .iter()
                    .map(|u| {
                        let q = test_probability(u).to_f64();
                        q > 0.0 && rng.gen::<f64>() < q
                    })
                    .collect()
            }
        };
        Ok(per_job(test))
    }
}

plan_algorithm!(MakespanRand);

/// Processes jobs in id order, testing exactly those flagged.
fn per_job<T: Time>(test: Vec<bool>) -> Plan<T> {
    let untested: Vec<JobId> = (0..test.len()).filter(|&j| !test[j]).collect();
    let tested: Vec<JobId> = (0..test.len()).filter(|&j| test[j]).collect();
    // Makespan ignores order, so untested jobs simply go first.
    Plan::new(untested, tested, Box::new(|_, _: &T| true))
}

pub(super) fn support<T: Time>(upper: &[T]) -> Option<Vec<(T, Box<dyn OnlineAlgorithm<T>>)>> {
    let probs: Vec<T> = upper.iter().map(test_probability).collect();
    let random: Vec<usize> = (0..upper.len()).filter(|&j| !probs[j].is_zero() && probs[j] != T::one()).collect();
    if random.len() > EXACT_MAX_FLIPS {
        return None;
    }
    let mut out = Vec::with_capacity(1 << random.len());
    for mask in 0u32..(1u32 << random.len()) {
        let mut decisions: Vec<bool> = probs.iter().map(|q| *q == T::one()).collect();
        let mut weight = T::one();
        for (bit, &j) in random.iter().enumerate() {
            let test = mask >> bit & 1 == 1;
            decisions[j] = test;
            weight = weight * if test { probs[j].clone() } else { T::one() - probs[j].clone() };
        }
        out.push((weight, Box::new(MakespanRand::with_decisions(decisions)) as Box<dyn OnlineAlgorithm<T>>));
    }
    Some(out)
}
