//! Parameter search: p=1 QAOA grid search with Pareto-frontier selection,
//! and multistart COBYLA for any ansatz.

mod grid;
mod local;

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ansatz::{self, AnsatzError, AnsatzKind, AnsatzParams, MixerTopology};
use crate::metrics::{approximation_ratio, MetricError};
use crate::problem::{OracleResult, ProblemError, ProblemInstance};
use crate::simulator::{Circuit, DiagonalCost, SimError, Statevector};

pub use grid::{
    grid_csv, grid_search_qaoa, max_penalized_expectation, pareto_frontier, select_qaoa_params, GridEvaluation,
    GridPoint, DEFAULT_GRID_SHOTS, DEFAULT_ICP_THRESHOLD,
};
pub use local::{local_optimize, multistart, LocalOptions, LocalResult, OptimizationRun, StartRecord};

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("no points to build a frontier from")]
    EmptyInput,
    #[error("no grid point has in-constraint probability above {0}")]
    NoFeasiblePoint(f64),
    #[error("invalid grid axis: {0}")]
    InvalidGrid(String),
    #[error("{0}")]
    InvalidSetting(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// `count` evenly spaced values from `start` to `end` inclusive, written
/// `start:end:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self, OptimizeError> {
        if count == 0 {
            return Err(OptimizeError::InvalidGrid("axis needs at least one point".into()));
        }
        if !start.is_finite() || !end.is_finite() {
            return Err(OptimizeError::InvalidGrid("axis bounds must be finite".into()));
        }
        Ok(Self { start, end, count })
    }

    /// 50 points on `[0, π]`.
    pub fn default_qaoa() -> Self {
        Self { start: 0.0, end: PI, count: 50 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for GridAxis {
    type Err = OptimizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OptimizeError::InvalidGrid(format!("expected start:end:count, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, k] = parts.as_slice() else {
            return Err(bad());
        };
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        let count = k.trim().parse().map_err(|_| bad())?;
        Self::new(start, end, count)
    }
}

/// Scores exact output distributions against one instance.
#[derive(Debug, Clone)]
pub struct ExactScorer {
    raw: Vec<f64>,
    penalized: Vec<f64>,
    m: usize,
    oracle: OracleResult,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactScore {
    pub icp: f64,
    /// `None` without in-constraint mass; 1 when every feasible string ties.
    pub approx_ratio: Option<f64>,
    pub raw_expectation: f64,
    pub penalized_expectation: f64,
}

impl ExactScorer {
    pub fn new(instance: &ProblemInstance) -> Result<Self, OptimizeError> {
        Ok(Self {
            raw: instance.raw_form().diagonal(),
            penalized: instance.penalized_form().diagonal(),
            m: instance.m(),
            oracle: instance.brute_force()?,
        })
    }

    pub fn oracle(&self) -> &OracleResult {
        &self.oracle
    }

    pub fn score(&self, state: &Statevector) -> ExactScore {
        let mut icp = 0.0;
        let mut feasible_sum = 0.0;
        let mut raw = 0.0;
        let mut pen = 0.0;
        for (x, a) in state.amplitudes().iter().enumerate() {
            let p = a.norm_sqr();
            raw += p * self.raw[x];
            pen += p * self.penalized[x];
            if (x as u64).count_ones() as usize == self.m {
                icp += p;
                feasible_sum += p * self.raw[x];
            }
        }
        let approx_ratio = (icp > 0.0).then(|| {
            let f = feasible_sum / icp;
            match approximation_ratio(f, self.oracle.f_min, self.oracle.f_max) {
                Ok(ar) => ar,
                Err(MetricError::DegenerateRange(_)) => 1.0,
            }
        });
        ExactScore { icp: icp.min(1.0), approx_ratio, raw_expectation: raw, penalized_expectation: pen }
    }
}

/// What multistart maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SearchObjective {
    /// Expected penalized objective.
    Penalized,
    /// Expected raw objective.
    Raw,
    /// Approximation ratio of the in-constraint part; below `icp_floor` the
    /// value is `icp − floor − 1`, which is worse than any admissible point.
    ApproxRatio { icp_floor: f64 },
}

impl SearchObjective {
    /// Raw for XY-QAOA, whose states never leave the constraint; penalized
    /// otherwise.
    pub fn default_for(kind: AnsatzKind) -> Self {
        match kind {
            AnsatzKind::XyQaoa => Self::Raw,
            AnsatzKind::Qaoa | AnsatzKind::Lvqe => Self::Penalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n_starts: usize,
    pub budget_per_start: usize,
    pub seed: u64,
    pub objective: SearchObjective,
    pub topology: MixerTopology,
    pub local: LocalOptions,
}

impl SearchConfig {
    pub fn new(kind: AnsatzKind, n: usize, seed: u64) -> Self {
        Self {
            n_starts: default_starts(kind, n),
            budget_per_start: 500,
            seed,
            objective: SearchObjective::default_for(kind),
            topology: MixerTopology::Path,
            local: LocalOptions::default(),
        }
    }
}

/// Start counts: 20 for L-VQE below 20 qubits, 5 from 20 up, 10 otherwise.
pub fn default_starts(kind: AnsatzKind, n: usize) -> usize {
    match kind {
        AnsatzKind::Lvqe if n >= 20 => 5,
        AnsatzKind::Lvqe => 20,
        AnsatzKind::Qaoa | AnsatzKind::XyQaoa => 10,
    }
}

/// Sampling box for random initial points.
pub fn parameter_ranges(kind: AnsatzKind, n: usize, p: usize) -> Vec<(f64, f64)> {
    match kind {
        AnsatzKind::Qaoa | AnsatzKind::XyQaoa => vec![(0.0, PI); 2 * p],
        AnsatzKind::Lvqe => vec![(0.0, 2.0 * PI); ansatz::lvqe_param_count(n, p)],
    }
}

/// Builds circuits for one ansatz on one instance with the cost diagonals
/// computed once.
#[derive(Debug, Clone)]
pub struct AnsatzBuilder {
    kind: AnsatzKind,
    p: usize,
    n: usize,
    m: usize,
    topology: MixerTopology,
    cost: Option<Arc<DiagonalCost>>,
    dicke: Option<Circuit>,
}

impl AnsatzBuilder {
    pub fn new(instance: &ProblemInstance, kind: AnsatzKind, p: usize, topology: MixerTopology) -> Result<Self, OptimizeError> {
        if p == 0 {
            return Err(OptimizeError::InvalidSetting("p must be at least 1".into()));
        }
        let (cost, dicke) = match kind {
            AnsatzKind::Qaoa => (Some(Arc::new(DiagonalCost::new(instance.penalized_form())?)), None),
            AnsatzKind::XyQaoa => (
                Some(Arc::new(DiagonalCost::new(instance.raw_form())?)),
                Some(ansatz::build_dicke(instance.n(), instance.m())?),
            ),
            AnsatzKind::Lvqe => (None, None),
        };
        Ok(Self { kind, p, n: instance.n(), m: instance.m(), topology, cost, dicke })
    }

    pub fn kind(&self) -> AnsatzKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        AnsatzParams::dimension(self.kind, self.n, self.p)
    }

    pub fn params(&self, v: &[f64]) -> AnsatzParams {
        AnsatzParams::from_vec(self.kind, self.p, v)
    }

    pub fn circuit(&self, params: &AnsatzParams) -> Result<Circuit, OptimizeError> {
        Ok(match self.kind {
            AnsatzKind::Qaoa => ansatz::qaoa_circuit(self.cost.as_ref().expect("qaoa cost"), params)?,
            AnsatzKind::XyQaoa => {
                let mut c = self.dicke.clone().expect("dicke prefix");
                c.append(&ansatz::xy_qaoa_layers(self.cost.as_ref().expect("xy cost"), params, self.topology)?)?;
                c
            }
            AnsatzKind::Lvqe => ansatz::build_lvqe(self.n, params.p, &params.thetas)?,
        })
    }

    pub fn state(&self, params: &AnsatzParams) -> Result<Statevector, OptimizeError> {
        Ok(self.circuit(params)?.simulate()?)
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

fn objective_value(objective: SearchObjective, score: &ExactScore) -> f64 {
    match objective {
        SearchObjective::Penalized => score.penalized_expectation,
        SearchObjective::Raw => score.raw_expectation,
        SearchObjective::ApproxRatio { icp_floor } => match score.approx_ratio {
            Some(ar) if score.icp >= icp_floor => ar,
            _ => score.icp - icp_floor - 1.0,
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedAnsatz {
    pub params: AnsatzParams,
    pub score: ExactScore,
    pub run: OptimizationRun,
}

/// Noiseless multistart search for `kind` at depth `p`.
pub fn optimize_ansatz(
    instance: &ProblemInstance,
    kind: AnsatzKind,
    p: usize,
    config: &SearchConfig,
) -> Result<OptimizedAnsatz, OptimizeError> {
    if config.n_starts == 0 || config.budget_per_start == 0 {
        return Err(OptimizeError::InvalidSetting("need at least one start and one evaluation".into()));
    }
    let builder = AnsatzBuilder::new(instance, kind, p, config.topology)?;
    let scorer = ExactScorer::new(instance)?;
    let ranges = parameter_ranges(kind, instance.n(), p);
    // surface construction errors once, before the objective assumes success
    builder.state(&builder.params(&vec![0.0; builder.dimension()]))?;
    let objective = |v: &[f64]| {
        let state = builder.state(&builder.params(v)).expect("parameter layout checked above");
        objective_value(config.objective, &scorer.score(&state))
    };
    let run = multistart(&objective, config.n_starts, &ranges, config.seed, config.budget_per_start, &config.local);
    let params = builder.params(&run.best_params);
    let score = scorer.score(&builder.state(&params)?);
    Ok(OptimizedAnsatz { params, score, run })
}
