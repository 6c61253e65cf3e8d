use std::fmt::Write as _;
use std::sync::Arc;

use super::{Gate, SimError, Statevector};
use crate::problem::QuadraticForm;

/// A diagonal cost `f(x)` with its values on every basis state precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCost {
    form: QuadraticForm,
    values: Vec<f64>,
}

impl DiagonalCost {
    pub fn new(form: QuadraticForm) -> Result<Self, SimError> {
        let n = form.n();
        if n == 0 || n > super::MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let values = form.diagonal();
        Ok(Self { form, values })
    }

    pub fn n_qubits(&self) -> usize {
        self.form.n()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// RZ/RZZ gates equal to `exp(−i·angle·f)` up to a global phase.
    ///
    /// With `x_i = (1 − z_i)/2` the cost becomes `Σ a_i z_i + Σ b_ij z_i z_j`
    /// plus a constant, so `exp(−iγf) ∝ Π RZ_i(2γa_i) Π RZZ_ij(2γb_ij)`.
    /// Pairs are emitted in round-robin order so disjoint pairs are adjacent.
    pub fn decompose(&self, angle: f64) -> Vec<Gate> {
        let n = self.n_qubits();
        let h = &self.form.linear;
        let j = &self.form.pair;
        let coupling = |a: usize, b: usize| if a < b { j[a][b] } else { j[b][a] };
        let mut gates = Vec::new();
        for i in 0..n {
            let field = -h[i] / 2.0 - (0..n).filter(|&k| k != i).map(|k| coupling(i, k)).sum::<f64>() / 4.0;
            if field != 0.0 {
                gates.push(Gate::Rz { qubit: i, theta: 2.0 * angle * field });
            }
        }
        for (a, b) in round_robin_pairs(n) {
            let c = coupling(a, b);
            if c != 0.0 {
                gates.push(Gate::Rzz { a, b, theta: 2.0 * angle * c / 4.0 });
            }
        }
        gates
    }
}

/// All unordered pairs of `0..n`, grouped into rounds of disjoint pairs.
pub(crate) fn round_robin_pairs(n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let players = if n % 2 == 0 { n } else { n + 1 };
    let ring = players - 1;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for round in 0..ring {
        let mut push = |a: usize, b: usize| {
            if a < n && b < n {
                out.push((a.min(b), a.max(b)));
            }
        };
        push(round, ring);
        for k in 1..players / 2 {
            push((round + k) % ring, (round + ring - k) % ring);
        }
    }
    out
}

/// `exp(−i·angle·f)` for the cost `f`, simulated as an exact diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOperator {
    pub angle: f64,
    pub cost: Arc<DiagonalCost>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Gate(Gate),
    Phase(PhaseOperator),
}

/// Ordered list of operations on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Operation>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 || n_qubits > super::MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        Ok(Self { n_qubits, ops: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, SimError> {
        let (a, b) = gate.qubits();
        if a >= self.n_qubits || b.is_some_and(|b| b >= self.n_qubits) {
            return Err(SimError::IndexOutOfRange { gate: gate.to_string(), n: self.n_qubits });
        }
        if b == Some(a) {
            return Err(SimError::RepeatedQubit(gate.to_string()));
        }
        self.ops.push(Operation::Gate(gate));
        Ok(self)
    }

    pub fn push_phase(&mut self, angle: f64, cost: Arc<DiagonalCost>) -> Result<&mut Self, SimError> {
        if cost.n_qubits() != self.n_qubits {
            return Err(SimError::DimensionMismatch { expected: self.n_qubits, found: cost.n_qubits() });
        }
        self.ops.push(Operation::Phase(PhaseOperator { angle, cost }));
        Ok(self)
    }

    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self, SimError> {
        if other.n_qubits != self.n_qubits {
            return Err(SimError::DimensionMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    /// Every phase operator replaced by its RZ/RZZ decomposition.
    pub fn expanded_gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                Operation::Gate(g) => out.push(*g),
                Operation::Phase(p) => out.extend(p.cost.decompose(p.angle)),
            }
        }
        out
    }

    pub fn apply_to(&self, state: &mut Statevector) -> Result<(), SimError> {
        if state.n_qubits() != self.n_qubits {
            return Err(SimError::DimensionMismatch { expected: self.n_qubits, found: state.n_qubits() });
        }
        for op in &self.ops {
            match op {
                Operation::Gate(g) => state.apply(g)?,
                Operation::Phase(p) => state.apply_phase(p.cost.values(), p.angle)?,
            }
        }
        Ok(())
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn simulate(&self) -> Result<Statevector, SimError> {
        let mut state = Statevector::zero(self.n_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// One gate per line, `KIND q0[,q1][,angle]`; phase operators appear in
    /// decomposed form.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in self.expanded_gates() {
            writeln!(out, "{g}").expect("writing to a String");
        }
        out
    }

    pub fn parse_dump(text: &str, n_qubits: usize) -> Result<Self, SimError> {
        let mut circuit = Circuit::new(n_qubits)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let gate = Gate::parse(line).map_err(|message| SimError::Parse { line: i + 1, message })?;
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}
