//! Dense statevector simulation.
//!
//! Basis index `x` stores qubit `i` in bit `i` (qubit 0 is the least
//! significant bit). Kernels are element-wise, so results are bit-identical
//! whatever the rayon thread count.

mod circuit;
mod gate;
mod noise;
mod sampling;

pub use circuit::{Circuit, DiagonalCost, Operation, PhaseOperator};
pub use gate::Gate;
pub use noise::{run_noisy, NoiseModel};
pub use sampling::{sample, ExactDistribution, Outcomes, SampleSet};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub const MAX_QUBITS: usize = 24;

/// States at least this large are updated in parallel.
const PAR_MIN_LEN: usize = 1 << 14;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("{0} qubits requested; supported range is 1..={MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("gate {gate} addresses qubits outside 0..{n}")]
    IndexOutOfRange { gate: String, n: usize },
    #[error("gate {0} acts twice on the same qubit")]
    RepeatedQubit(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("amplitudes are not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("invalid noise rate {name} = {value}; must lie in [0, 1]")]
    InvalidNoise { name: &'static str, value: f64 },
    #[error("shots must be at least 1")]
    NoShots,
    #[error("circuit dump line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// 1 → X, 2 → Y, 3 → Z; 0 is identity.
    pub(crate) fn from_code(code: u8) -> Option<Pauli> {
        match code {
            1 => Some(Pauli::X),
            2 => Some(Pauli::Y),
            3 => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<(), SimError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    Ok(())
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        check_qubits(n)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(SimError::DimensionMismatch { expected: len.next_power_of_two().max(2), found: len });
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        let sv = Self { n_qubits: n, amplitudes };
        let norm = sv.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn distribution(&self) -> ExactDistribution {
        ExactDistribution::new(self.n_qubits, self.probabilities())
    }

    fn validate(&self, gate: &Gate) -> Result<(), SimError> {
        let (a, b) = gate.qubits();
        let n = self.n_qubits;
        if a >= n || b.is_some_and(|b| b >= n) {
            return Err(SimError::IndexOutOfRange { gate: gate.to_string(), n });
        }
        if b == Some(a) {
            return Err(SimError::RepeatedQubit(gate.to_string()));
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        self.validate(gate)?;
        match *gate {
            Gate::Rx { qubit, theta } => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let m = [
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ];
                self.apply_single(qubit, m);
            }
            Gate::Ry { qubit, theta } => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let m = [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ];
                self.apply_single(qubit, m);
            }
            Gate::Rz { qubit, theta } => {
                let p0 = Complex64::from_polar(1.0, -theta / 2.0);
                let p1 = Complex64::from_polar(1.0, theta / 2.0);
                self.map_diagonal(|x, a| *a *= if (x >> qubit) & 1 == 0 { p0 } else { p1 });
            }
            Gate::H { qubit } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(qubit, [[h, h], [h, -h]]);
            }
            Gate::Cnot { control, target } => {
                for_each_pair(&mut self.amplitudes, target, |x, a0, a1| {
                    if (x >> control) & 1 == 1 {
                        std::mem::swap(a0, a1);
                    }
                });
            }
            Gate::Rzz { a, b, theta } => {
                let even = Complex64::from_polar(1.0, -theta / 2.0);
                let odd = Complex64::from_polar(1.0, theta / 2.0);
                self.map_diagonal(|x, amp| {
                    *amp *= if ((x >> a) ^ (x >> b)) & 1 == 0 { even } else { odd };
                });
            }
            Gate::RxxPlusYy { a, b, theta } => self.apply_xy(a, b, theta),
        }
        Ok(())
    }

    /// Multiplies each amplitude by `exp(−i·angle·values[x])`.
    pub fn apply_phase(&mut self, values: &[f64], angle: f64) -> Result<(), SimError> {
        if values.len() != self.dim() {
            return Err(SimError::DimensionMismatch { expected: self.dim(), found: values.len() });
        }
        if angle == 0.0 {
            return Ok(());
        }
        self.map_diagonal(|x, a| *a *= Complex64::from_polar(1.0, -angle * values[x]));
        Ok(())
    }

    /// `Σ_x |a_x|²·values[x]`, summed in index order.
    pub fn expectation_diagonal(&self, values: &[f64]) -> Result<f64, SimError> {
        if values.len() != self.dim() {
            return Err(SimError::DimensionMismatch { expected: self.dim(), found: values.len() });
        }
        Ok(self.amplitudes.iter().zip(values).map(|(a, v)| a.norm_sqr() * v).sum())
    }

    pub fn expectation_with(&self, f: impl Fn(u64) -> f64) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(x, a)| a.norm_sqr() * f(x as u64))
            .sum()
    }

    pub(crate) fn apply_pauli(&mut self, qubit: usize, p: Pauli) {
        match p {
            Pauli::X => for_each_pair(&mut self.amplitudes, qubit, |_, a0, a1| std::mem::swap(a0, a1)),
            Pauli::Y => for_each_pair(&mut self.amplitudes, qubit, |_, a0, a1| {
                let (z0, z1) = (*a0, *a1);
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                *a0 = Complex64::new(z1.im, -z1.re);
                *a1 = Complex64::new(-z0.im, z0.re);
            }),
            Pauli::Z => self.map_diagonal(|x, a| {
                if (x >> qubit) & 1 == 1 {
                    *a = -*a;
                }
            }),
        }
    }

    fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        for_each_pair(&mut self.amplitudes, qubit, |_, a0, a1| {
            let (z0, z1) = (*a0, *a1);
            *a0 = m[0][0] * z0 + m[0][1] * z1;
            *a1 = m[1][0] * z0 + m[1][1] * z1;
        });
    }

    fn apply_xy(&mut self, a: usize, b: usize, theta: f64) {
        let (hi_q, lo_q) = if a > b { (a, b) } else { (b, a) };
        let (c, s) = (theta.cos(), theta.sin());
        let half = 1usize << hi_q;
        let lo_bit = 1usize << lo_q;
        let body = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            // lo[k] has (hi_q=0, lo_q=1); its partner hi[k−lo_bit] has (1, 0).
            for k in 0..half {
                if k & lo_bit != 0 {
                    let z01 = lo[k];
                    let z10 = hi[k - lo_bit];
                    lo[k] = z01 * c + z10 * Complex64::new(0.0, -s);
                    hi[k - lo_bit] = z10 * c + z01 * Complex64::new(0.0, -s);
                }
            }
        };
        if self.amplitudes.len() >= PAR_MIN_LEN {
            self.amplitudes.par_chunks_mut(half << 1).for_each(body);
        } else {
            self.amplitudes.chunks_mut(half << 1).for_each(body);
        }
    }

    fn map_diagonal(&mut self, f: impl Fn(usize, &mut Complex64) + Sync + Send) {
        if self.amplitudes.len() >= PAR_MIN_LEN {
            self.amplitudes.par_iter_mut().enumerate().for_each(|(x, a)| f(x, a));
        } else {
            self.amplitudes.iter_mut().enumerate().for_each(|(x, a)| f(x, a));
        }
    }
}

/// Visits every amplitude pair differing only in `qubit`, passing the index
/// of the member with that bit clear.
fn for_each_pair<F>(amps: &mut [Complex64], qubit: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync + Send,
{
    let half = 1usize << qubit;
    let size = half << 1;
    let chunks = amps.len() / size;
    let body = |(ci, chunk): (usize, &mut [Complex64])| {
        let (lo, hi) = chunk.split_at_mut(half);
        let base = ci * size;
        for (k, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(base + k, a0, a1);
        }
    };
    if amps.len() < PAR_MIN_LEN {
        amps.chunks_mut(size).enumerate().for_each(body);
    } else if chunks >= 16 {
        amps.par_chunks_mut(size).enumerate().for_each(body);
    } else {
        for (ci, chunk) in amps.chunks_mut(size).enumerate() {
            let (lo, hi) = chunk.split_at_mut(half);
            let base = ci * size;
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .for_each(|(k, (a0, a1))| f(base + k, a0, a1));
        }
    }
}
