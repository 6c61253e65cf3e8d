//! Approximation ratio, in-constraint probability and Hamming-distance
//! statistics over sampled or exact output distributions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;
use crate::problem::{OracleResult, ProblemInstance};
use crate::simulator::Outcomes;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("f_max == f_min == {0}: every feasible solution ties")]
    DegenerateRange(f64),
}

/// `(f_observed − f_min) / (f_max − f_min)`.
pub fn approximation_ratio(f_observed: f64, f_min: f64, f_max: f64) -> Result<f64, MetricError> {
    if f_max == f_min {
        return Err(MetricError::DegenerateRange(f_max));
    }
    Ok((f_observed - f_min) / (f_max - f_min))
}

/// Share of the total weight on strings of Hamming weight `m`.
pub fn in_constraint_probability(outcomes: &dyn Outcomes, m: usize) -> f64 {
    let mut inside = 0.0;
    let mut total = 0.0;
    outcomes.for_each_outcome(&mut |x, w| {
        total += w;
        if bits::weight(x) as usize == m {
            inside += w;
        }
    });
    if total == 0.0 {
        0.0
    } else {
        (inside / total).min(1.0)
    }
}

/// Weighted mean of the raw objective over in-constraint outcomes, `None`
/// when there are none.
pub fn mean_in_constraint_objective(outcomes: &dyn Outcomes, instance: &ProblemInstance) -> Option<f64> {
    let mut mass = 0.0;
    let mut total = 0.0;
    outcomes.for_each_outcome(&mut |x, w| {
        if instance.is_feasible(x) {
            mass += w;
            total += w * instance.raw_value(x);
        }
    });
    (mass > 0.0).then(|| total / mass)
}

/// Probability of each distance `|wt(x) − m|`, for every distance in
/// `0..=max(m, n−m)`.
pub fn hamming_distance_distribution(outcomes: &dyn Outcomes, m: usize) -> BTreeMap<usize, f64> {
    let n = outcomes.n_qubits();
    let max_d = m.max(n.saturating_sub(m));
    let mut hist: BTreeMap<usize, f64> = (0..=max_d).map(|d| (d, 0.0)).collect();
    let mut total = 0.0;
    outcomes.for_each_outcome(&mut |x, w| {
        let d = (bits::weight(x) as usize).abs_diff(m);
        *hist.entry(d).or_insert(0.0) += w;
        total += w;
    });
    if total > 0.0 {
        hist.values_mut().for_each(|v| *v /= total);
    }
    hist
}

/// Distance distribution of a uniformly random `n`-bit string.
pub fn random_hamming_baseline(n: usize, m: usize) -> BTreeMap<usize, f64> {
    let max_d = m.max(n - m);
    let mut hist: BTreeMap<usize, f64> = (0..=max_d).map(|d| (d, 0.0)).collect();
    let scale = (2.0f64).powi(n as i32);
    for w in 0..=n {
        *hist.entry(w.abs_diff(m)).or_insert(0.0) += bits::binomial(n as u64, w as u64) as f64 / scale;
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// `None` when no in-constraint outcome was observed.
    pub approx_ratio: Option<f64>,
    /// Set when all feasible strings tie; `approx_ratio` is then 1.
    pub degenerate: bool,
    pub icp: f64,
    pub f_observed: Option<f64>,
    pub hamming_hist: BTreeMap<usize, f64>,
}

impl MetricReport {
    pub fn evaluate(outcomes: &dyn Outcomes, instance: &ProblemInstance, oracle: &OracleResult) -> Self {
        let f_observed = mean_in_constraint_objective(outcomes, instance);
        let (approx_ratio, degenerate) = match f_observed {
            None => (None, false),
            Some(f) => match approximation_ratio(f, oracle.f_min, oracle.f_max) {
                Ok(ar) => (Some(ar), false),
                Err(MetricError::DegenerateRange(_)) => (Some(1.0), true),
            },
        };
        Self {
            approx_ratio,
            degenerate,
            icp: in_constraint_probability(outcomes, instance.m()),
            f_observed,
            hamming_hist: hamming_distance_distribution(outcomes, instance.m()),
        }
    }
}
