use std::cell::{Cell, RefCell};

use cobyla::{RhoBeg, StopTols};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalOptions {
    /// Initial trust-region radius.
    pub rho_begin: f64,
    pub ftol_abs: f64,
    pub xtol_abs: f64,
}

impl Default for LocalOptions {
    fn default() -> Self {
        Self { rho_begin: 0.5, ftol_abs: 1e-12, xtol_abs: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalResult {
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximizes `objective` with COBYLA from `initial`, using at most `budget`
/// evaluations. Returns the best point evaluated, which is never worse than
/// `initial`.
pub fn local_optimize(
    objective: &dyn Fn(&[f64]) -> f64,
    initial: &[f64],
    budget: usize,
    options: &LocalOptions,
) -> LocalResult {
    assert!(budget >= 1, "budget must allow one evaluation");
    let first = objective(initial);
    let best = RefCell::new((initial.to_vec(), if first.is_nan() { f64::NEG_INFINITY } else { first }));
    let evaluations = Cell::new(1usize);
    if budget > 1 && !initial.is_empty() {
        let minimand = |x: &[f64], _: &mut ()| {
            if evaluations.get() >= budget {
                return f64::INFINITY;
            }
            evaluations.set(evaluations.get() + 1);
            let v = objective(x);
            let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
            let mut b = best.borrow_mut();
            if v > b.1 {
                *b = (x.to_vec(), v);
            }
            -v
        };
        let d = initial.len();
        let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); d];
        let tols = StopTols { ftol_abs: options.ftol_abs, xtol_abs: vec![options.xtol_abs; d], ..StopTols::default() };
        let no_constraints: &[fn(&[f64], &mut ()) -> f64] = &[];
        // best-so-far is tracked above, so the outcome status carries nothing extra
        let _ = cobyla::minimize(
            minimand,
            initial,
            &bounds,
            no_constraints,
            (),
            budget - 1,
            RhoBeg::All(options.rho_begin),
            Some(tols),
        );
    }
    let (params, value) = best.into_inner();
    LocalResult { params, value: if value == f64::NEG_INFINITY { first } else { value }, evaluations: evaluations.get() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartRecord {
    pub initial: Vec<f64>,
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationRun {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub starts: Vec<StartRecord>,
}

fn initial_point(ranges: &[(f64, f64)], seed: u64, start: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start);
    ranges.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect()
}

/// [`local_optimize`] from `n_starts` points drawn uniformly from `ranges`.
/// Start `k` draws from ChaCha stream `(seed, k)`, so the first `k` starts do
/// not depend on `n_starts`; the earliest of equally good starts wins.
pub fn multistart(
    objective: &(dyn Fn(&[f64]) -> f64 + Sync),
    n_starts: usize,
    ranges: &[(f64, f64)],
    seed: u64,
    budget_per_start: usize,
    options: &LocalOptions,
) -> OptimizationRun {
    assert!(n_starts >= 1, "need at least one start");
    let starts: Vec<StartRecord> = (0..n_starts as u64)
        .into_par_iter()
        .map(|k| {
            let initial = initial_point(ranges, seed, k);
            let r = local_optimize(objective, &initial, budget_per_start, options);
            StartRecord { initial, params: r.params, value: r.value, evaluations: r.evaluations }
        })
        .collect();
    let best = starts
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(_, s)| s)
        .expect("at least one start");
    OptimizationRun {
        best_params: best.params.clone(),
        best_value: best.value,
        evaluations: starts.iter().map(|s| s.evaluations).sum(),
        starts,
    }
}
