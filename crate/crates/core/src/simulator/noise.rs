//! Stochastic Pauli noise by trajectory sampling.
//!
//! After every gate (phase operators count as their RZ/RZZ decomposition) a
//! uniformly random non-identity Pauli is inserted with probability `p1`
//! (one-qubit gates, 3 choices) or `p2` (two-qubit gates, 15 choices). Each
//! measured bit is then flipped with probability `p_spam`. Shot `s` draws
//! everything from its own ChaCha stream `(seed, s)`, so results do not
//! depend on scheduling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::Cdf;
use super::{sample, Circuit, Gate, Pauli, SampleSet, SimError, Statevector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_spam: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_spam: f64) -> Result<Self, SimError> {
        for (name, value) in [("p1", p1), ("p2", p2), ("p_spam", p_spam)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::InvalidNoise { name, value });
            }
        }
        Ok(Self { p1, p2, p_spam })
    }

    /// Headline trapped-ion rates: 5e-5 one-qubit, 3e-3 two-qubit, 3e-3 SPAM.
    pub fn h1() -> Self {
        Self { p1: 5e-5, p2: 3e-3, p_spam: 3e-3 }
    }

    pub fn noiseless() -> Self {
        Self { p1: 0.0, p2: 0.0, p_spam: 0.0 }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_spam == 0.0
    }
}

/// `(gate position, Pauli code)`; codes 1..=3 for one-qubit gates and
/// 1..=15 (`first + 4·second`) for two-qubit gates.
type ErrorPattern = Vec<(u32, u8)>;

struct ShotDraw {
    uniform: f64,
    flips: u64,
}

fn draw_shot(gates: &[Gate], noise: &NoiseModel, n: usize, seed: u64, shot: u64) -> (ErrorPattern, ShotDraw) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    let mut pattern = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        let (p, choices) = if g.is_two_qubit() { (noise.p2, 15u8) } else { (noise.p1, 3u8) };
        if p > 0.0 && rng.gen::<f64>() < p {
            pattern.push((i as u32, rng.gen_range(1..=choices)));
        }
    }
    let uniform = rng.gen::<f64>();
    let mut flips = 0u64;
    if noise.p_spam > 0.0 {
        for q in 0..n {
            if rng.gen::<f64>() < noise.p_spam {
                flips |= 1 << q;
            }
        }
    }
    (pattern, ShotDraw { uniform, flips })
}

fn simulate_with_errors(n: usize, gates: &[Gate], pattern: &ErrorPattern) -> Result<Statevector, SimError> {
    let mut state = Statevector::zero(n)?;
    let mut next = pattern.iter().peekable();
    for (i, g) in gates.iter().enumerate() {
        state.apply(g)?;
        while let Some(&&(pos, code)) = next.peek() {
            if pos as usize != i {
                break;
            }
            next.next();
            let (a, b) = g.qubits();
            match b {
                None => state.apply_pauli(a, Pauli::from_code(code).expect("code in 1..=3")),
                Some(b) => {
                    if let Some(p) = Pauli::from_code(code % 4) {
                        state.apply_pauli(a, p);
                    }
                    if let Some(p) = Pauli::from_code(code / 4) {
                        state.apply_pauli(b, p);
                    }
                }
            }
        }
    }
    Ok(state)
}

/// Monte Carlo trajectories of `circuit` from `|0…0⟩`, one per shot.
///
/// With every rate zero this reduces to [`sample`] of the noiseless state with
/// the same seed.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, shots: u64, seed: u64) -> Result<SampleSet, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let noise = NoiseModel::new(noise.p1, noise.p2, noise.p_spam)?;
    let n = circuit.n_qubits();
    let ideal = circuit.simulate()?;
    if noise.is_noiseless() {
        return sample(&ideal, shots, seed);
    }
    let gates = circuit.expanded_gates();

    let draws: Vec<(ErrorPattern, ShotDraw)> =
        (0..shots).into_par_iter().map(|s| draw_shot(&gates, &noise, n, seed, s)).collect();
    let mut groups: BTreeMap<ErrorPattern, Vec<ShotDraw>> = BTreeMap::new();
    for (pattern, draw) in draws {
        groups.entry(pattern).or_default().push(draw);
    }
    let ideal_cdf = Cdf::new(&ideal);
    let groups: Vec<(ErrorPattern, Vec<ShotDraw>)> = groups.into_iter().collect();
    let outcomes: Vec<Vec<u64>> = groups
        .par_iter()
        .map(|(pattern, draws)| -> Result<Vec<u64>, SimError> {
            let owned;
            let cdf = if pattern.is_empty() {
                &ideal_cdf
            } else {
                owned = Cdf::new(&simulate_with_errors(n, &gates, pattern)?);
                &owned
            };
            Ok(draws.iter().map(|d| cdf.lookup(d.uniform) ^ d.flips).collect())
        })
        .collect::<Result<_, _>>()?;
    SampleSet::from_outcomes(n, outcomes.into_iter().flatten())
}
