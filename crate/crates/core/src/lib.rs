//! Classical toolkit for constrained variational quantum optimization applied to
//! extractive summarization.
//!
//! The pipeline runs text → centralities and similarities ([`textprep`]) →
//! a cardinality-constrained quadratic objective ([`problem`]) → QAOA, XY-QAOA
//! or L-VQE circuits ([`ansatz`]) simulated exactly on a dense statevector
//! ([`simulator`]) → parameter search ([`optimize`]) → evaluation
//! ([`metrics`], [`rouge`]).
//!
//! Bitstrings are `u64` basis indices: bit `i` is qubit `i` (and sentence `i`).
//! When printed, qubit 0 comes first.

pub mod ansatz;
pub mod bits;
pub mod metrics;
pub mod optimize;
pub mod problem;
pub mod rouge;
pub mod simulator;
pub mod textprep;

pub use ansatz::{AnsatzKind, AnsatzParams, GateConvention, GateStats, MixerTopology};
pub use metrics::MetricReport;
pub use optimize::{GridPoint, OptimizationRun};
pub use problem::{OracleResult, PenalizedCoefficients, ProblemInstance, QuadraticForm};
pub use rouge::{RougeScores, SweepPoint};
pub use simulator::{Circuit, Gate, NoiseModel, SampleSet, Statevector};
pub use textprep::{EmbeddingSet, IdfMode, SentenceCorpus};

/// Redundancy weight used throughout the experiments unless overridden.
pub const DEFAULT_LAMBDA: f64 = 0.075;
