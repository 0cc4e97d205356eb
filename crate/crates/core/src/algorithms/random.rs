use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{permutations, plan_algorithm, preprocess_small_limits, remaining, Plan};
use crate::engine::{EngineError, OnlineAlgorithm};
use crate::num::Time;

/// Largest number of tested jobs whose test orders are enumerated exactly.
pub const EXACT_MAX_TESTED: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomParams {
    /// Jobs with a smaller upper limit are never tested.
    #[serde(rename = "T")]
    pub t: f64,
    /// Tested jobs with `p ≤ E` are executed at once.
    #[serde(rename = "E")]
    pub e: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { t: 1.7453, e: 2.8609 }
    }
}

/// Runs jobs with `p̄ < T` untested, tests the rest in uniformly random
/// order, executes a tested job at once iff `p ≤ E` and runs the deferred
/// jobs last in ascending `p`.
pub struct Random<T> {
    params: RandomParams,
    rng: Option<ChaCha8Rng>,
    /// Test order as positions in the list of tested jobs, if fixed.
    order: Option<Vec<usize>>,
    plan: Option<Plan<T>>,
}

impl<T: Time> Random<T> {
    pub fn new(params: RandomParams, rng: ChaCha8Rng) -> Self {
        Random { params, rng: Some(rng), order: None, plan: None }
    }

    /// The algorithm with its test order fixed: the `k`-th test goes to the
    /// `order[k]`-th job (in id order) among those it tests.
    pub fn with_order(params: RandomParams, order: Vec<usize>) -> Self {
        Random { params, rng: None, order: Some(order), plan: None }
    }

    fn label(&self) -> String {
        format!("random[T={},E={}]", self.params.t, self.params.e)
    }

    fn build(&self, upper: &[T]) -> Result<Plan<T>, EngineError> {
        let prefix = preprocess_small_limits(upper, &T::from_f64(self.params.t));
        let candidates = remaining(upper.len(), &prefix);
        let tests = match &self.order {
            Some(order) => {
                if order.len() != candidates.len() {
                    return Err(EngineError::Config(format!(
                        "fixed test order has {} entries, {} jobs are tested",
                        order.len(),
                        candidates.len()
                    )));
                }
                order.iter().map(|&k| candidates[k]).collect()
            }
            None => {
                let mut tests = candidates;
                let mut rng = self.rng.clone().expect("seeded");
                tests.shuffle(&mut rng);
                tests
            }
        };
        let e = T::from_f64(self.params.e);
        Ok(Plan::new(prefix, tests, Box::new(move |_, p: &T| *p <= e)))
    }
}

plan_algorithm!(Random);

pub(super) fn support<T: Time>(params: RandomParams, upper: &[T]) -> Option<Vec<(T, Box<dyn OnlineAlgorithm<T>>)>> {
    let t = T::from_f64(params.t);
    let k = upper.iter().filter(|u| **u >= t).count();
    if k > EXACT_MAX_TESTED {
        return None;
    }
    let orders = permutations(k);
    let weight = T::one() / T::from_usize(orders.len());
    Some(
        orders
            .into_iter()
            .map(|o| (weight.clone(), Box::new(Random::with_order(params, o)) as Box<dyn OnlineAlgorithm<T>>))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmSpec;
    use crate::engine::{exact_expectation, monte_carlo, simulate, AlgorithmFactory};
    use crate::model::{Instance, Objective};
    use crate::num::Rational;
    use rand::SeedableRng;

    fn r(x: f64) -> Rational {
        Rational::from_f64(x)
    }

    #[test]
    fn long_single_job_costs_four() {
        let inst = Instance::from_pairs([(r(3.0), r(3.0))]);
        for seed in 0..5 {
            let mut alg = Random::new(RandomParams::default(), ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(*simulate(&mut alg, &inst).unwrap().total_completion(), r(4.0));
        }
    }

    #[test]
    fn exact_expectation_is_mean_over_orders() {
        let p = RandomParams::default();
        let inst = Instance::from_pairs([(r(1.7453), r(0.0)), (r(2.8609), r(2.8609)), (r(2.8609), r(0.0))]);
        let spec = AlgorithmSpec::Random(p);
        let exact = exact_expectation(&spec, &inst, Objective::Sum).unwrap().unwrap();
        let mut total = r(0.0);
        for o in permutations(3) {
            total += simulate(&mut Random::with_order(p, o), &inst).unwrap().total_completion().clone();
        }
        assert_eq!(exact, total / r(6.0));

        let mc = monte_carlo(&spec, &inst.convert::<f64>(), Objective::Sum, 4000, 11).unwrap();
        assert!((mc.mean - exact.to_f64()).abs() <= 3.0 * mc.stderr + 1e-12);
    }

    #[test]
    fn too_many_tests_for_exact_support() {
        let upper = vec![r(3.0); EXACT_MAX_TESTED + 1];
        assert!(AlgorithmFactory::support(&AlgorithmSpec::Random(RandomParams::default()), &upper).is_none());
    }

    #[test]
    fn same_seed_same_trace() {
        let inst = Instance::from_pairs((0..20).map(|i| (3.0, (i % 4) as f64 * 0.9)));
        let run = |seed| {
            let mut alg = Random::new(RandomParams::default(), ChaCha8Rng::seed_from_u64(seed));
            simulate(&mut alg, &inst).unwrap()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }
}
