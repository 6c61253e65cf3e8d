//! The cardinality-constrained summarization objective, its penalized QUBO
//! form, and exhaustive oracles.
//!
//! Pair sums `Σ_{i≠j}` run over ordered pairs, so a symmetric `β` contributes
//! each unordered pair twice.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;

/// Largest instance the enumeration oracles accept.
pub const MAX_ENUMERATION_QUBITS: usize = 24;

pub const PROBLEM_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("summary length m={m} must satisfy 0 < m < n={n}")]
    InfeasibleConstraint { m: usize, n: usize },
    #[error("bitstring has {found} bits, instance has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0} variables exceed the enumeration bound of {MAX_ENUMERATION_QUBITS}")]
    TooLarge(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("problem file: {0}")]
    Format(String),
}

/// `constant + Σ_i linear[i]·x_i + Σ_{i<j} pair[i][j]·x_i·x_j` over unordered
/// pairs. Only the strict upper triangle of `pair` is read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub constant: f64,
    pub linear: Vec<f64>,
    pub pair: Vec<Vec<f64>>,
}

impl QuadraticForm {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn evaluate(&self, x: u64) -> f64 {
        let n = self.n();
        let mut v = self.constant;
        for i in 0..n {
            if bits::bit(x, i) {
                v += self.linear[i];
                for j in i + 1..n {
                    if bits::bit(x, j) {
                        v += self.pair[i][j];
                    }
                }
            }
        }
        v
    }

    /// Values on every basis state, built incrementally from the lowest set
    /// bit. `O(n·2^n)`.
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.n();
        let dim = 1usize << n;
        let mut out = vec![0.0; dim];
        out[0] = self.constant;
        for x in 1..dim {
            let i = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            let mut v = out[rest] + self.linear[i];
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                v += self.pair[i][j];
                r &= r - 1;
            }
            out[x] = v;
        }
        out
    }
}

/// Linear and ordered-pair quadratic coefficients of the penalized objective
/// with the constant `−Γm²` dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenalizedCoefficients {
    pub linear: Vec<f64>,
    pub quadratic: Vec<Vec<f64>>,
}

impl PenalizedCoefficients {
    /// `Σ_i linear_i x_i − Σ_{i≠j} quadratic_ij x_i x_j`.
    pub fn evaluate(&self, x: u64) -> f64 {
        let n = self.linear.len();
        let mut v = 0.0;
        for i in 0..n {
            if !bits::bit(x, i) {
                continue;
            }
            v += self.linear[i];
            for j in 0..n {
                if j != i && bits::bit(x, j) {
                    v -= self.quadratic[i][j];
                }
            }
        }
        v
    }

    pub fn to_form(&self) -> QuadraticForm {
        let n = self.linear.len();
        let mut pair = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                pair[i][j] = -(self.quadratic[i][j] + self.quadratic[j][i]);
            }
        }
        QuadraticForm { constant: 0.0, linear: self.linear.clone(), pair }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub f_min: f64,
    pub f_max: f64,
    pub argmax: u64,
    pub feasible_count: u64,
    pub mean_feasible: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    m: usize,
    mu: Vec<f64>,
    beta: Vec<Vec<f64>>,
    lambda: f64,
    gamma: f64,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl ProblemInstance {
    /// Validates the inputs and sets `Γ` from [`Self::gamma_rule`].
    pub fn new(mu: Vec<f64>, beta: Vec<Vec<f64>>, lambda: f64, m: usize) -> Result<Self, ProblemError> {
        let n = mu.len();
        if beta.len() != n || beta.iter().any(|r| r.len() != n) {
            return Err(ProblemError::DimensionMismatch(format!(
                "mu has {n} entries but beta is not {n}x{n}"
            )));
        }
        if m == 0 || m >= n {
            return Err(ProblemError::InfeasibleConstraint { m, n });
        }
        for i in 0..n {
            if beta[i][i] != 0.0 {
                return Err(ProblemError::DimensionMismatch(format!("beta[{i}][{i}] must be 0")));
            }
            for j in i + 1..n {
                if (beta[i][j] - beta[j][i]).abs() > SYMMETRY_TOL {
                    return Err(ProblemError::DimensionMismatch(format!(
                        "beta is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if mu.iter().chain(beta.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(ProblemError::InvalidParameter("non-finite coefficient".into()));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(ProblemError::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        let mut inst = Self { n, m, mu, beta, lambda, gamma: 0.0 };
        inst.gamma = inst.gamma_rule();
        Ok(inst)
    }

    /// Replaces the penalty weight.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self, ProblemError> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(ProblemError::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
        }
        self.gamma = gamma;
        Ok(self)
    }

    /// Same instance with a different `λ`; `Γ` is recomputed.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self, ProblemError> {
        Self::new(self.mu.clone(), self.beta.clone(), lambda, self.m)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }
    pub fn beta(&self) -> &[Vec<f64>] {
        &self.beta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `Γ = Σ μ(i) + λ Σ_{i≠j} β(i,j)`.
    pub fn gamma_rule(&self) -> f64 {
        let mu: f64 = self.mu.iter().sum();
        let beta: f64 = (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.beta[i][j])
            .sum();
        mu + self.lambda * beta
    }

    fn check_len(&self, x: &[bool]) -> Result<u64, ProblemError> {
        if x.len() != self.n {
            return Err(ProblemError::LengthMismatch { expected: self.n, found: x.len() });
        }
        Ok(bits::from_bools(x))
    }

    pub fn objective_raw(&self, x: &[bool]) -> Result<f64, ProblemError> {
        Ok(self.raw_value(self.check_len(x)?))
    }

    pub fn objective_penalized(&self, x: &[bool]) -> Result<f64, ProblemError> {
        Ok(self.penalized_value(self.check_len(x)?))
    }

    /// Raw objective on a basis index (bits above `n` are ignored).
    pub fn raw_value(&self, x: u64) -> f64 {
        let mut v = 0.0;
        for i in 0..self.n {
            if !bits::bit(x, i) {
                continue;
            }
            v += self.mu[i];
            for j in 0..self.n {
                if j != i && bits::bit(x, j) {
                    v -= self.lambda * self.beta[i][j];
                }
            }
        }
        v
    }

    pub fn penalized_value(&self, x: u64) -> f64 {
        let w = (x & self.mask()).count_ones() as f64;
        let d = w - self.m as f64;
        self.raw_value(x) - self.gamma * d * d
    }

    fn mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn is_feasible(&self, x: u64) -> bool {
        bits::weight(x & self.mask()) as usize == self.m
    }

    pub fn penalized_coefficients(&self) -> PenalizedCoefficients {
        let g = self.gamma;
        let m = self.m as f64;
        let linear = self.mu.iter().map(|mu| mu + 2.0 * g * m - g).collect();
        let quadratic = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if i == j { 0.0 } else { self.lambda * self.beta[i][j] + g })
                    .collect()
            })
            .collect();
        PenalizedCoefficients { linear, quadratic }
    }

    /// Raw objective as an unordered-pair quadratic form.
    pub fn raw_form(&self) -> QuadraticForm {
        let mut pair = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                pair[i][j] = -self.lambda * (self.beta[i][j] + self.beta[j][i]);
            }
        }
        QuadraticForm { constant: 0.0, linear: self.mu.clone(), pair }
    }

    /// Penalized objective, constant included.
    pub fn penalized_form(&self) -> QuadraticForm {
        let mut form = self.penalized_coefficients().to_form();
        form.constant = -self.gamma * (self.m * self.m) as f64;
        form
    }

    fn ensure_enumerable(&self) -> Result<(), ProblemError> {
        if self.n > MAX_ENUMERATION_QUBITS {
            return Err(ProblemError::TooLarge(self.n));
        }
        Ok(())
    }

    /// Exhaustive min/max/mean of the raw objective over weight-`m` strings.
    /// Ties for the maximum go to the lexicographically smallest printed
    /// bitstring.
    pub fn brute_force(&self) -> Result<OracleResult, ProblemError> {
        self.ensure_enumerable()?;
        let mut f_min = f64::INFINITY;
        let mut f_max = f64::NEG_INFINITY;
        let mut argmax = 0u64;
        let mut total = 0.0;
        let mut count = 0u64;
        for x in bits::fixed_weight(self.n, self.m) {
            let v = self.raw_value(x);
            total += v;
            count += 1;
            f_min = f_min.min(v);
            if v > f_max || (v == f_max && bits::lex_cmp(x, argmax).is_lt()) {
                f_max = v;
                argmax = x;
            }
        }
        // Keep min ≤ mean ≤ max exact under rounding.
        let mean_feasible = (total / count as f64).clamp(f_min, f_max);
        Ok(OracleResult { f_min, f_max, argmax, feasible_count: count, mean_feasible })
    }

    /// Expected raw objective of a uniformly random feasible string.
    pub fn random_baseline(&self) -> Result<f64, ProblemError> {
        Ok(self.brute_force()?.mean_feasible)
    }

    /// Synthetic instance: `μ ~ U(0,1)`, symmetric `β ~ U(0,1)` off the diagonal.
    pub fn random(n: usize, m: usize, lambda: f64, seed: u64) -> Result<Self, ProblemError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let mut beta = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = rng.gen::<f64>();
                beta[i][j] = b;
                beta[j][i] = b;
            }
        }
        Self::new(mu, beta, lambda, m)
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            schema_version: PROBLEM_SCHEMA_VERSION,
            n: self.n,
            m: self.m,
            lambda: self.lambda,
            gamma: Some(self.gamma),
            mu: self.mu.clone(),
            beta: self.beta.clone(),
            provenance: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProblemError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ProblemError::Format(format!("{}: {e}", path.display())))?;
        ProblemFile::from_json(&text)?.into_instance()
    }
}

/// Notes on how a problem file was produced from text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub article: String,
    pub sentences: Vec<String>,
    pub idf_mode: crate::textprep::IdfMode,
    /// `"file"` or `"tfidf-fallback"`.
    pub embeddings: String,
    #[serde(default)]
    pub tf_substituted: Vec<usize>,
}

/// On-disk problem description. A missing `gamma` is filled by the rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub n: usize,
    pub m: usize,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    pub mu: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn default_schema() -> u32 {
    PROBLEM_SCHEMA_VERSION
}

fn default_lambda() -> f64 {
    crate::DEFAULT_LAMBDA
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn into_instance(self) -> Result<ProblemInstance, ProblemError> {
        if self.mu.len() != self.n {
            return Err(ProblemError::DimensionMismatch(format!(
                "n={} but mu has {} entries",
                self.n,
                self.mu.len()
            )));
        }
        let inst = ProblemInstance::new(self.mu, self.beta, self.lambda, self.m)?;
        match self.gamma {
            Some(g) => inst.with_gamma(g),
            None => Ok(inst),
        }
    }
}
