use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExactScorer, OptimizeError};
use crate::ansatz::{qaoa_circuit, AnsatzParams};
use crate::metrics::{approximation_ratio, in_constraint_probability, mean_in_constraint_objective, MetricError};
use crate::problem::ProblemInstance;
use crate::simulator::{sample, DiagonalCost, Outcomes};

pub const DEFAULT_GRID_SHOTS: u64 = 1000;
pub const DEFAULT_ICP_THRESHOLD: f64 = 0.06;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub gamma: f64,
    pub beta: f64,
    /// `None` when the point put no weight on in-constraint strings.
    pub approx_ratio: Option<f64>,
    pub in_constraint_prob: f64,
    pub penalized_expectation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum GridEvaluation {
    Exact,
    /// Point `k` (row-major, `γ` outer) samples with seed `seed + k`.
    Sampled { shots: u64, seed: u64 },
}

/// p=1 QAOA over the penalized objective at every `(γ, β)`, row-major with
/// `γ` as the outer index.
pub fn grid_search_qaoa(
    instance: &ProblemInstance,
    gammas: &[f64],
    betas: &[f64],
    evaluation: GridEvaluation,
) -> Result<Vec<GridPoint>, OptimizeError> {
    if gammas.is_empty() || betas.is_empty() {
        return Err(OptimizeError::InvalidGrid("grid axes must be non-empty".into()));
    }
    let cost = Arc::new(DiagonalCost::new(instance.penalized_form())?);
    let scorer = ExactScorer::new(instance)?;
    let oracle = scorer.oracle().clone();
    let nb = betas.len();
    (0..gammas.len() * nb)
        .into_par_iter()
        .map(|k| {
            let (gamma, beta) = (gammas[k / nb], betas[k % nb]);
            let state = qaoa_circuit(&cost, &AnsatzParams::qaoa(vec![gamma], vec![beta]))?.simulate()?;
            Ok(match evaluation {
                GridEvaluation::Exact => {
                    let s = scorer.score(&state);
                    GridPoint {
                        gamma,
                        beta,
                        approx_ratio: s.approx_ratio,
                        in_constraint_prob: s.icp,
                        penalized_expectation: s.penalized_expectation,
                    }
                }
                GridEvaluation::Sampled { shots, seed } => {
                    let set = sample(&state, shots, seed.wrapping_add(k as u64))?;
                    let approx_ratio = mean_in_constraint_objective(&set, instance).map(|f| {
                        match approximation_ratio(f, oracle.f_min, oracle.f_max) {
                            Ok(ar) => ar,
                            Err(MetricError::DegenerateRange(_)) => 1.0,
                        }
                    });
                    let mut pen = 0.0;
                    set.for_each_outcome(&mut |x, w| pen += w * instance.penalized_value(x));
                    GridPoint {
                        gamma,
                        beta,
                        approx_ratio,
                        in_constraint_prob: in_constraint_probability(&set, instance.m()),
                        penalized_expectation: pen / set.total_weight(),
                    }
                }
            })
        })
        .collect()
}

/// Points not dominated in (approximation ratio, ICP), sorted by ascending
/// ICP. Points without an approximation ratio are ignored.
pub fn pareto_frontier(points: &[GridPoint]) -> Result<Vec<GridPoint>, OptimizeError> {
    let mut defined: Vec<(f64, f64, &GridPoint)> =
        points.iter().filter_map(|p| p.approx_ratio.map(|ar| (ar, p.in_constraint_prob, p))).collect();
    if defined.is_empty() {
        return Err(OptimizeError::EmptyInput);
    }
    defined.sort_by(|a, b| b.1.total_cmp(&a.1).then(b.0.total_cmp(&a.0)));
    let mut frontier = Vec::new();
    let mut best_higher = f64::NEG_INFINITY;
    let mut i = 0;
    while i < defined.len() {
        let icp = defined[i].1;
        let top = defined[i].0;
        let mut j = i;
        while j < defined.len() && defined[j].1 == icp {
            if defined[j].0 == top && top > best_higher {
                frontier.push(*defined[j].2);
            }
            j += 1;
        }
        best_higher = best_higher.max(top);
        i = j;
    }
    frontier.sort_by(|a, b| {
        a.in_constraint_prob
            .total_cmp(&b.in_constraint_prob)
            .then(a.gamma.total_cmp(&b.gamma))
            .then(a.beta.total_cmp(&b.beta))
    });
    Ok(frontier)
}

fn lexicographic(a: &GridPoint, b: &GridPoint) -> Ordering {
    a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta))
}

/// Highest approximation ratio among points with ICP strictly above
/// `threshold`; ties go to higher ICP, then smaller `(γ, β)`.
pub fn select_qaoa_params(points: &[GridPoint], threshold: f64) -> Result<GridPoint, OptimizeError> {
    points
        .iter()
        .filter(|p| p.in_constraint_prob > threshold && p.approx_ratio.is_some())
        .min_by(|a, b| {
            let (ar_a, ar_b) = (a.approx_ratio.unwrap_or(f64::NAN), b.approx_ratio.unwrap_or(f64::NAN));
            ar_b.total_cmp(&ar_a)
                .then(b.in_constraint_prob.total_cmp(&a.in_constraint_prob))
                .then(lexicographic(a, b))
        })
        .copied()
        .ok_or(OptimizeError::NoFeasiblePoint(threshold))
}

/// Point with the largest penalized-objective expectation.
pub fn max_penalized_expectation(points: &[GridPoint]) -> Option<GridPoint> {
    points
        .iter()
        .min_by(|a, b| b.penalized_expectation.total_cmp(&a.penalized_expectation).then(lexicographic(a, b)))
        .copied()
}

/// `gamma,beta,approx_ratio,icp`, one row per point; an undefined ratio is
/// left empty.
pub fn grid_csv(points: &[GridPoint]) -> String {
    let mut out = String::from("gamma,beta,approx_ratio,icp\n");
    for p in points {
        let ar = p.approx_ratio.map(|v| format!("{v:?}")).unwrap_or_default();
        writeln!(out, "{:?},{:?},{ar},{:?}", p.gamma, p.beta, p.in_constraint_prob).expect("write to String");
    }
    out
}
