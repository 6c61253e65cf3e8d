//! Circuit builders for QAOA, XY-QAOA (Dicke-initialized) and L-VQE, plus
//! two-qubit gate accounting.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::ProblemInstance;
use crate::simulator::{Circuit, DiagonalCost, Gate, Operation, SimError};

#[derive(Debug, Error, PartialEq)]
pub enum AnsatzError {
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("Dicke state needs 0 < m < n, got n={n}, m={m}")]
    InfeasibleConstraint { n: usize, m: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    #[serde(rename = "qaoa")]
    Qaoa,
    #[serde(rename = "xy-qaoa")]
    XyQaoa,
    #[serde(rename = "lvqe")]
    Lvqe,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Qaoa => "qaoa",
            AnsatzKind::XyQaoa => "xy-qaoa",
            AnsatzKind::Lvqe => "lvqe",
        }
    }
}

impl std::str::FromStr for AnsatzKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qaoa" => Ok(Self::Qaoa),
            "xy-qaoa" => Ok(Self::XyQaoa),
            "lvqe" => Ok(Self::Lvqe),
            other => Err(format!("unknown algorithm {other:?} (expected qaoa|xy-qaoa|lvqe)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixerTopology {
    /// Pairs `(k, k+1)` for `k = 0..n−2`.
    #[default]
    Path,
    /// Path plus the closing pair `(n−1, 0)`.
    Ring,
}

impl std::str::FromStr for MixerTopology {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "path" => Ok(Self::Path),
            "ring" => Ok(Self::Ring),
            other => Err(format!("unknown mixer topology {other:?} (expected path|ring)")),
        }
    }
}

/// Circuit parameters. QAOA kinds use `gammas`/`betas` (length `p`), L-VQE
/// uses `thetas` (length [`lvqe_param_count`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub kind: AnsatzKind,
    pub p: usize,
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub thetas: Vec<f64>,
}

/// `n` initial angles plus four per nearest-neighbour block per layer.
pub fn lvqe_param_count(n: usize, p: usize) -> usize {
    n + 4 * p * n.saturating_sub(1)
}

impl AnsatzParams {
    pub fn qaoa(gammas: Vec<f64>, betas: Vec<f64>) -> Self {
        Self { kind: AnsatzKind::Qaoa, p: gammas.len(), gammas, betas, thetas: Vec::new() }
    }

    pub fn xy_qaoa(gammas: Vec<f64>, betas: Vec<f64>) -> Self {
        Self { kind: AnsatzKind::XyQaoa, p: gammas.len(), gammas, betas, thetas: Vec::new() }
    }

    pub fn lvqe(p: usize, thetas: Vec<f64>) -> Self {
        Self { kind: AnsatzKind::Lvqe, p, gammas: Vec::new(), betas: Vec::new(), thetas }
    }

    /// Number of free parameters for an `n`-qubit circuit.
    pub fn dimension(kind: AnsatzKind, n: usize, p: usize) -> usize {
        match kind {
            AnsatzKind::Qaoa | AnsatzKind::XyQaoa => 2 * p,
            AnsatzKind::Lvqe => lvqe_param_count(n, p),
        }
    }

    /// Flat vector: `[γ_1..γ_p, β_1..β_p]` or the L-VQE thetas.
    pub fn to_vec(&self) -> Vec<f64> {
        match self.kind {
            AnsatzKind::Qaoa | AnsatzKind::XyQaoa => {
                self.gammas.iter().chain(&self.betas).copied().collect()
            }
            AnsatzKind::Lvqe => self.thetas.clone(),
        }
    }

    pub fn from_vec(kind: AnsatzKind, p: usize, v: &[f64]) -> Self {
        match kind {
            AnsatzKind::Qaoa | AnsatzKind::XyQaoa => {
                assert_eq!(v.len(), 2 * p, "expected 2p parameters");
                Self {
                    kind,
                    p,
                    gammas: v[..p].to_vec(),
                    betas: v[p..].to_vec(),
                    thetas: Vec::new(),
                }
            }
            AnsatzKind::Lvqe => Self::lvqe(p, v.to_vec()),
        }
    }

    pub fn validate(&self, expected: AnsatzKind, n: usize) -> Result<(), AnsatzError> {
        if self.kind != expected {
            return Err(AnsatzError::ParamMismatch(format!(
                "expected {} parameters, got {}",
                expected.name(),
                self.kind.name()
            )));
        }
        if self.p == 0 {
            return Err(AnsatzError::ParamMismatch("p must be at least 1".into()));
        }
        let all = self.gammas.iter().chain(&self.betas).chain(&self.thetas);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(AnsatzError::ParamMismatch("non-finite parameter".into()));
        }
        match self.kind {
            AnsatzKind::Qaoa | AnsatzKind::XyQaoa => {
                if self.gammas.len() != self.p || self.betas.len() != self.p {
                    return Err(AnsatzError::ParamMismatch(format!(
                        "p={} needs {} gammas and betas, got {} and {}",
                        self.p,
                        self.p,
                        self.gammas.len(),
                        self.betas.len()
                    )));
                }
            }
            AnsatzKind::Lvqe => {
                let want = lvqe_param_count(n, self.p);
                if self.thetas.len() != want {
                    return Err(AnsatzError::ParamMismatch(format!(
                        "L-VQE with n={n}, p={} needs {want} angles, got {}",
                        self.p,
                        self.thetas.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Uniform superposition, then per layer: phase operator, `RX(2β)` on all
/// qubits.
pub fn qaoa_circuit(cost: &Arc<DiagonalCost>, params: &AnsatzParams) -> Result<Circuit, AnsatzError> {
    let n = cost.n_qubits();
    params.validate(AnsatzKind::Qaoa, n)?;
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.push(Gate::H { qubit: q })?;
    }
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        c.push_phase(gamma, Arc::clone(cost))?;
        for q in 0..n {
            c.push(Gate::Rx { qubit: q, theta: 2.0 * beta })?;
        }
    }
    Ok(c)
}

/// QAOA on the penalized objective.
pub fn build_qaoa(instance: &ProblemInstance, params: &AnsatzParams) -> Result<Circuit, AnsatzError> {
    let cost = Arc::new(DiagonalCost::new(instance.penalized_form())?);
    qaoa_circuit(&cost, params)
}

fn mixer_pairs(n: usize, topology: MixerTopology) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
    if topology == MixerTopology::Ring && n > 2 {
        pairs.push((n - 1, 0));
    }
    pairs
}

/// Phase and XY-mixer layers without the initial state.
pub fn xy_qaoa_layers(
    cost: &Arc<DiagonalCost>,
    params: &AnsatzParams,
    topology: MixerTopology,
) -> Result<Circuit, AnsatzError> {
    let n = cost.n_qubits();
    params.validate(AnsatzKind::XyQaoa, n)?;
    let pairs = mixer_pairs(n, topology);
    let mut c = Circuit::new(n)?;
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        c.push_phase(gamma, Arc::clone(cost))?;
        for &(a, b) in &pairs {
            c.push(Gate::RxxPlusYy { a, b, theta: beta })?;
        }
    }
    Ok(c)
}

/// Dicke state `|D^n_m⟩`, then [`xy_qaoa_layers`].
pub fn xy_qaoa_circuit(
    cost: &Arc<DiagonalCost>,
    m: usize,
    params: &AnsatzParams,
    topology: MixerTopology,
) -> Result<Circuit, AnsatzError> {
    let mut c = build_dicke(cost.n_qubits(), m)?;
    c.append(&xy_qaoa_layers(cost, params, topology)?)?;
    Ok(c)
}

/// XY-QAOA on the raw objective.
pub fn build_xy_qaoa(
    instance: &ProblemInstance,
    params: &AnsatzParams,
    topology: MixerTopology,
) -> Result<Circuit, AnsatzError> {
    let cost = Arc::new(DiagonalCost::new(instance.raw_form())?);
    xy_qaoa_circuit(&cost, instance.m(), params, topology)
}

/// `RY` layer, then per layer a brickwork of nearest-neighbour blocks (even
/// pairs first, then odd). Each block is `RY⊗RY · CNOT · RY⊗RY · CNOT`.
pub fn build_lvqe(n: usize, p: usize, thetas: &[f64]) -> Result<Circuit, AnsatzError> {
    let params = AnsatzParams::lvqe(p, thetas.to_vec());
    params.validate(AnsatzKind::Lvqe, n)?;
    let mut c = Circuit::new(n)?;
    let mut angles = thetas.iter().copied();
    let mut next = || angles.next().expect("length validated");
    for q in 0..n {
        c.push(Gate::Ry { qubit: q, theta: next() })?;
    }
    for _ in 0..p {
        for parity in [0, 1] {
            for k in (parity..n.saturating_sub(1)).step_by(2) {
                for _ in 0..2 {
                    c.push(Gate::Ry { qubit: k, theta: next() })?;
                    c.push(Gate::Ry { qubit: k + 1, theta: next() })?;
                    c.push(Gate::Cnot { control: k, target: k + 1 })?;
                }
            }
        }
    }
    Ok(c)
}

fn push_cry(c: &mut Circuit, control: usize, target: usize, theta: f64) -> Result<(), SimError> {
    c.push(Gate::Ry { qubit: target, theta: theta / 2.0 })?;
    c.push(Gate::Cnot { control, target })?;
    c.push(Gate::Ry { qubit: target, theta: -theta / 2.0 })?;
    c.push(Gate::Cnot { control, target })?;
    Ok(())
}

/// Doubly-controlled RY from four CNOTs: the target rotation angles cancel
/// unless both controls are set.
fn push_ccry(c: &mut Circuit, c1: usize, c2: usize, target: usize, theta: f64) -> Result<(), SimError> {
    let q = theta / 4.0;
    c.push(Gate::Ry { qubit: target, theta: q })?;
    c.push(Gate::Cnot { control: c1, target })?;
    c.push(Gate::Ry { qubit: target, theta: -q })?;
    c.push(Gate::Cnot { control: c2, target })?;
    c.push(Gate::Ry { qubit: target, theta: q })?;
    c.push(Gate::Cnot { control: c1, target })?;
    c.push(Gate::Ry { qubit: target, theta: -q })?;
    c.push(Gate::Cnot { control: c2, target })?;
    Ok(())
}

/// Split-and-cyclic-shift block `SCS_{l,k}` on (1-based) qubits `l−k..=l`.
fn push_scs(c: &mut Circuit, l: usize, k: usize) -> Result<(), SimError> {
    let q = |i: usize| i - 1;
    let lf = l as f64;
    c.push(Gate::Cnot { control: q(l - 1), target: q(l) })?;
    push_cry(c, q(l), q(l - 1), 2.0 * (1.0 / lf).sqrt().acos())?;
    c.push(Gate::Cnot { control: q(l - 1), target: q(l) })?;
    for j in 2..=k {
        let theta = 2.0 * (j as f64 / lf).sqrt().acos();
        c.push(Gate::Cnot { control: q(l - j), target: q(l) })?;
        push_ccry(c, q(l), q(l - j + 1), q(l - j), theta)?;
        c.push(Gate::Cnot { control: q(l - j), target: q(l) })?;
    }
    Ok(())
}

/// Deterministic Dicke-state preparation from `|0…0⟩` by a cascade of
/// split-and-cyclic-shift blocks, with every controlled rotation lowered to
/// RY and CNOT.
pub fn build_dicke(n: usize, m: usize) -> Result<Circuit, AnsatzError> {
    if m == 0 || m >= n {
        return Err(AnsatzError::InfeasibleConstraint { n, m });
    }
    let mut c = Circuit::new(n)?;
    for qubit in n - m..n {
        c.push(Gate::Ry { qubit, theta: PI })?;
    }
    for l in (m + 1..=n).rev() {
        push_scs(&mut c, l, m)?;
    }
    for l in (2..=m).rev() {
        push_scs(&mut c, l, l - 1)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateConvention {
    /// Every two-qubit gate counts once.
    #[default]
    Native2q,
    /// RZZ and RXXplusYY count as two CNOTs each.
    CnotDecomposed,
}

impl std::str::FromStr for GateConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "native-2q" => Ok(Self::Native2q),
            "cnot-decomposed" => Ok(Self::CnotDecomposed),
            other => Err(format!("unknown gate convention {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateStats {
    pub two_qubit_count: usize,
    pub two_qubit_depth: usize,
    pub convention: GateConvention,
}

/// Two-qubit gate count and ASAP-layered depth. Phase operators are counted
/// through their RZ/RZZ decomposition; one-qubit gates are ignored.
pub fn gate_stats(circuit: &Circuit, convention: GateConvention) -> GateStats {
    let mut level = vec![0usize; circuit.n_qubits()];
    let mut count = 0;
    let mut depth = 0;
    let mut visit = |g: &Gate| {
        let (a, Some(b)) = g.qubits() else { return };
        let w = match (convention, g) {
            (GateConvention::CnotDecomposed, Gate::Rzz { .. } | Gate::RxxPlusYy { .. }) => 2,
            _ => 1,
        };
        count += w;
        let end = level[a].max(level[b]) + w;
        level[a] = end;
        level[b] = end;
        depth = depth.max(end);
    };
    for op in circuit.ops() {
        match op {
            Operation::Gate(g) => visit(g),
            Operation::Phase(p) => p.cost.decompose(p.angle).iter().for_each(&mut visit),
        }
    }
    GateStats { two_qubit_count: count, two_qubit_depth: depth, convention }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;

    fn dicke_mass(n: usize, m: usize) -> (f64, f64, f64) {
        let probs = build_dicke(n, m).unwrap().simulate().unwrap().probabilities();
        let target = 1.0 / bits::binomial(n as u64, m as u64) as f64;
        let mut worst: f64 = 0.0;
        let mut outside = 0.0;
        let mut inside = 0.0;
        for (x, p) in probs.iter().enumerate() {
            if bits::weight(x as u64) as usize == m {
                worst = worst.max((p - target).abs());
                inside += p;
            } else {
                outside += p;
            }
        }
        (worst, outside, inside)
    }

    #[test]
    fn dicke_small_cases() {
        for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3), (6, 1), (6, 5)] {
            let (worst, outside, _) = dicke_mass(n, m);
            assert!(worst < 1e-12 && outside < 1e-12, "n={n} m={m}: {worst} {outside}");
        }
        assert_eq!(build_dicke(3, 0), Err(AnsatzError::InfeasibleConstraint { n: 3, m: 0 }));
        assert_eq!(build_dicke(3, 3), Err(AnsatzError::InfeasibleConstraint { n: 3, m: 3 }));
    }

    #[test]
    fn lvqe_counts_and_shapes() {
        assert_eq!(lvqe_param_count(14, 1), 14 + 52);
        let zero = build_lvqe(4, 1, &vec![0.0; lvqe_param_count(4, 1)]).unwrap();
        assert!((zero.simulate().unwrap().probabilities()[0] - 1.0).abs() < 1e-12);
        assert!(matches!(build_lvqe(4, 1, &[0.0; 3]), Err(AnsatzError::ParamMismatch(_))));
        let s = gate_stats(&build_lvqe(5, 3, &vec![0.1; lvqe_param_count(5, 3)]).unwrap(), GateConvention::CnotDecomposed);
        assert_eq!((s.two_qubit_count, s.two_qubit_depth), (24, 12));
    }

    #[test]
    fn param_validation() {
        let inst = ProblemInstance::random(3, 1, 0.1, 1).unwrap();
        let bad = AnsatzParams::qaoa(vec![0.1], vec![]);
        assert!(matches!(build_qaoa(&inst, &bad), Err(AnsatzError::ParamMismatch(_))));
        let wrong_kind = AnsatzParams::xy_qaoa(vec![0.1], vec![0.2]);
        assert!(matches!(build_qaoa(&inst, &wrong_kind), Err(AnsatzError::ParamMismatch(_))));
        let flat = AnsatzParams::qaoa(vec![0.1, 0.2], vec![0.3, 0.4]);
        assert_eq!(AnsatzParams::from_vec(AnsatzKind::Qaoa, 2, &flat.to_vec()), flat);
    }

    #[test]
    fn empty_circuit_stats() {
        let s = gate_stats(&Circuit::new(3).unwrap(), GateConvention::Native2q);
        assert_eq!((s.two_qubit_count, s.two_qubit_depth), (0, 0));
    }

    #[test]
    fn ring_adds_closing_pair() {
        assert_eq!(mixer_pairs(4, MixerTopology::Path).len(), 3);
        assert_eq!(mixer_pairs(4, MixerTopology::Ring).last(), Some(&(3, 0)));
        assert_eq!(mixer_pairs(2, MixerTopology::Ring).len(), 1);
    }
}
