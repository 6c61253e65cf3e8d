use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{SimError, Statevector};
use crate::bits;

/// Anything that assigns non-negative weight to basis states: measured counts
/// or an exact output distribution.
pub trait Outcomes {
    fn n_qubits(&self) -> usize;
    /// Visits `(bitstring, weight)` for every state with non-zero weight, in
    /// increasing bitstring order.
    fn for_each_outcome(&self, f: &mut dyn FnMut(u64, f64));

    fn total_weight(&self) -> f64 {
        let mut t = 0.0;
        self.for_each_outcome(&mut |_, w| t += w);
        t
    }
}

/// Measured bitstrings with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    n_qubits: usize,
    counts: BTreeMap<u64, u64>,
    shots: u64,
}

impl SampleSet {
    pub fn from_counts(n_qubits: usize, counts: BTreeMap<u64, u64>) -> Result<Self, SimError> {
        let counts: BTreeMap<u64, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let shots = counts.values().sum();
        if shots == 0 {
            return Err(SimError::NoShots);
        }
        if let Some(&x) = counts.keys().find(|&&x| n_qubits < 64 && x >> n_qubits != 0) {
            return Err(SimError::IndexOutOfRange { gate: format!("outcome {x}"), n: n_qubits });
        }
        Ok(Self { n_qubits, counts, shots })
    }

    pub fn from_outcomes(n_qubits: usize, outcomes: impl IntoIterator<Item = u64>) -> Result<Self, SimError> {
        let mut counts = BTreeMap::new();
        for x in outcomes {
            *counts.entry(x).or_insert(0) += 1;
        }
        Self::from_counts(n_qubits, counts)
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, x: u64) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }
}

impl Outcomes for SampleSet {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn for_each_outcome(&self, f: &mut dyn FnMut(u64, f64)) {
        for (&x, &c) in &self.counts {
            f(x, c as f64);
        }
    }

    fn total_weight(&self) -> f64 {
        self.shots as f64
    }
}

#[derive(Serialize, Deserialize)]
struct SampleSetRepr {
    n: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Serialize for SampleSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SampleSetRepr {
            n: self.n_qubits,
            shots: self.shots,
            counts: self.counts.iter().map(|(&x, &c)| (bits::to_string(x, self.n_qubits), c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SampleSetRepr::deserialize(d)?;
        let mut counts = BTreeMap::new();
        for (k, c) in repr.counts {
            if k.len() != repr.n {
                return Err(D::Error::custom(format!("bitstring {k:?} does not have {} bits", repr.n)));
            }
            let x = bits::parse(&k).ok_or_else(|| D::Error::custom(format!("bad bitstring {k:?}")))?;
            counts.insert(x, c);
        }
        let set = SampleSet::from_counts(repr.n, counts).map_err(D::Error::custom)?;
        if set.shots != repr.shots {
            return Err(D::Error::custom(format!("shots {} != sum of counts {}", repr.shots, set.shots)));
        }
        Ok(set)
    }
}

/// Exact probabilities over all `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl ExactDistribution {
    pub fn new(n_qubits: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1usize << n_qubits);
        Self { n_qubits, probs }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }
}

impl Outcomes for ExactDistribution {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn for_each_outcome(&self, f: &mut dyn FnMut(u64, f64)) {
        for (x, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                f(x as u64, p);
            }
        }
    }
}

pub(crate) struct Cdf {
    cumulative: Vec<f64>,
    probs: Vec<f64>,
}

impl Cdf {
    pub(crate) fn new(state: &Statevector) -> Self {
        let probs = state.probabilities();
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative, probs }
    }

    /// Maps a uniform draw in `[0, 1)` to a basis state.
    pub(crate) fn lookup(&self, u: f64) -> u64 {
        let total = *self.cumulative.last().expect("non-empty");
        let target = u * total;
        let mut i = self.cumulative.partition_point(|&c| c <= target).min(self.probs.len() - 1);
        while self.probs[i] == 0.0 && i > 0 {
            i -= 1;
        }
        i as u64
    }
}

/// Draws `shots` i.i.d. measurements; fully determined by `seed`.
pub fn sample(state: &Statevector, shots: u64, seed: u64) -> Result<SampleSet, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let cdf = Cdf::new(state);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampleSet::from_outcomes(state.n_qubits(), (0..shots).map(|_| cdf.lookup(rng.gen::<f64>())))
}
