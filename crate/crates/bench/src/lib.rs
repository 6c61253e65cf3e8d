//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use qsum::simulator::DiagonalCost;
use qsum::{ProblemInstance, Statevector};

/// Random instance with `m = n / 2 - 1`, as in the larger experiments.
pub fn instance(n: usize, seed: u64) -> ProblemInstance {
    ProblemInstance::random(n, n / 2 - 1, qsum::DEFAULT_LAMBDA, seed).expect("valid instance")
}

pub fn penalized_cost(instance: &ProblemInstance) -> Arc<DiagonalCost> {
    Arc::new(DiagonalCost::new(instance.penalized_form()).expect("fits in the simulator"))
}

pub fn zero_state(n: usize) -> Statevector {
    Statevector::zero(n).expect("fits in the simulator")
}
