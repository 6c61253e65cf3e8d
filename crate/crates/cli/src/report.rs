use std::collections::BTreeMap;

use qsum::metrics::MetricReport;
use qsum::optimize::{GridAxis, GridEvaluation, GridPoint, SearchObjective};
use qsum::simulator::{ExactDistribution, Outcomes};
use qsum::{bits, AnsatzKind, AnsatzParams, GateStats, MixerTopology, NoiseModel, OracleResult, RougeScores, SampleSet};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Probabilities below this are left out of serialized distributions.
pub const DISTRIBUTION_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub f_min: f64,
    pub f_max: f64,
    /// Qubit 0 first.
    pub argmax: String,
    pub feasible_count: u64,
    pub mean_feasible: f64,
    /// Approximation ratio of a uniformly random feasible summary.
    pub random_approx_ratio: Option<f64>,
}

impl OracleSummary {
    pub fn new(oracle: &OracleResult, n: usize) -> Self {
        let range = oracle.f_max - oracle.f_min;
        Self {
            f_min: oracle.f_min,
            f_max: oracle.f_max,
            argmax: bits::to_string(oracle.argmax, n),
            feasible_count: oracle.feasible_count,
            mean_feasible: oracle.mean_feasible,
            random_approx_ratio: (range != 0.0).then(|| (oracle.mean_feasible - oracle.f_min) / range),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum ParameterSource {
    Grid {
        gamma: GridAxis,
        beta: GridAxis,
        evaluation: GridEvaluation,
        icp_threshold: f64,
        selected: GridPoint,
    },
    Multistart {
        objective: SearchObjective,
        starts: usize,
        budget_per_start: usize,
        evaluations: usize,
        best_value: f64,
    },
    File {
        path: String,
    },
}

/// Sparse exact distribution, keyed by bitstring with qubit 0 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRecord {
    pub n: usize,
    pub cutoff: f64,
    pub probabilities: BTreeMap<String, f64>,
}

impl DistributionRecord {
    pub fn from_exact(dist: &ExactDistribution) -> Self {
        let n = dist.n_qubits();
        let probabilities = dist
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= DISTRIBUTION_CUTOFF)
            .map(|(x, &p)| (bits::to_string(x as u64, n), p))
            .collect();
        Self { n, cutoff: DISTRIBUTION_CUTOFF, probabilities }
    }

    pub fn to_outcomes(&self) -> Result<SparseOutcomes, String> {
        let mut entries = Vec::with_capacity(self.probabilities.len());
        for (k, &p) in &self.probabilities {
            if k.len() != self.n {
                return Err(format!("bitstring {k:?} does not have {} bits", self.n));
            }
            let x = bits::parse(k).ok_or_else(|| format!("bad bitstring {k:?}"))?;
            entries.push((x, p));
        }
        entries.sort_by_key(|e| e.0);
        Ok(SparseOutcomes { n: self.n, entries })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOutcomes {
    n: usize,
    entries: Vec<(u64, f64)>,
}

impl Outcomes for SparseOutcomes {
    fn n_qubits(&self) -> usize {
        self.n
    }

    fn for_each_outcome(&self, f: &mut dyn FnMut(u64, f64)) {
        for &(x, p) in &self.entries {
            f(x, p);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub algorithm: AnsatzKind,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub params: AnsatzParams,
    pub parameter_source: ParameterSource,
    pub mixer_topology: Option<MixerTopology>,
    /// `None` in exact mode.
    pub shots: Option<u64>,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
    pub metrics: MetricReport,
    pub gate_stats: GateStats,
    pub oracle: OracleSummary,
    pub rouge: Option<RougeScores>,
    pub samples: Option<SampleSet>,
    pub distribution: Option<DistributionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoReport {
    pub schema_version: u32,
    pub n: usize,
    pub m: usize,
    pub gamma: GridAxis,
    pub beta: GridAxis,
    pub evaluation: GridEvaluation,
    pub points: usize,
    pub icp_threshold: f64,
    /// Ascending ICP, non-increasing approximation ratio.
    pub frontier: Vec<GridPoint>,
    /// Best approximation ratio above the ICP threshold.
    pub selected: Option<GridPoint>,
    pub max_penalized_expectation: Option<GridPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RougeReport {
    pub schema_version: u32,
    pub m: usize,
    #[serde(flatten)]
    pub scores: RougeScores,
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
