use std::fmt;

/// Native gate set. Rotations follow `R_P(θ) = exp(−iθP/2)`;
/// `RxxPlusYy(θ) = exp(−i(θ/2)(XX+YY))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, theta: f64 },
    Ry { qubit: usize, theta: f64 },
    Rz { qubit: usize, theta: f64 },
    H { qubit: usize },
    Cnot { control: usize, target: usize },
    Rzz { a: usize, b: usize, theta: f64 },
    RxxPlusYy { a: usize, b: usize, theta: f64 },
}

impl Gate {
    /// Name used in circuit dumps.
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::H { .. } => "H",
            Gate::Cnot { .. } => "CNOT",
            Gate::Rzz { .. } => "RZZ",
            Gate::RxxPlusYy { .. } => "RXXplusYY",
        }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } | Gate::H { qubit } => {
                (qubit, None)
            }
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Rzz { a, b, .. } | Gate::RxxPlusYy { a, b, .. } => (a, Some(b)),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Rzz { theta, .. }
            | Gate::RxxPlusYy { theta, .. } => Some(theta),
            Gate::H { .. } | Gate::Cnot { .. } => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    /// Parses one dump line: `KIND q0[,q1][,angle]`.
    pub fn parse(line: &str) -> Result<Gate, String> {
        let line = line.trim();
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("missing operands in {line:?}"))?;
        let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
        let qubit = |i: usize| -> Result<usize, String> {
            fields
                .get(i)
                .ok_or_else(|| format!("{kind}: missing qubit {i}"))?
                .parse::<usize>()
                .map_err(|e| format!("{kind}: bad qubit index: {e}"))
        };
        let angle = |i: usize| -> Result<f64, String> {
            fields
                .get(i)
                .ok_or_else(|| format!("{kind}: missing angle"))?
                .parse::<f64>()
                .map_err(|e| format!("{kind}: bad angle: {e}"))
        };
        let arity = |k: usize| -> Result<(), String> {
            if fields.len() == k {
                Ok(())
            } else {
                Err(format!("{kind}: expected {k} operands, found {}", fields.len()))
            }
        };
        let gate = match kind {
            "RX" | "RY" | "RZ" => {
                arity(2)?;
                let (qubit, theta) = (qubit(0)?, angle(1)?);
                match kind {
                    "RX" => Gate::Rx { qubit, theta },
                    "RY" => Gate::Ry { qubit, theta },
                    _ => Gate::Rz { qubit, theta },
                }
            }
            "H" => {
                arity(1)?;
                Gate::H { qubit: qubit(0)? }
            }
            "CNOT" => {
                arity(2)?;
                Gate::Cnot { control: qubit(0)?, target: qubit(1)? }
            }
            "RZZ" | "RXXplusYY" => {
                arity(3)?;
                let (a, b, theta) = (qubit(0)?, qubit(1)?, angle(2)?);
                if kind == "RZZ" {
                    Gate::Rzz { a, b, theta }
                } else {
                    Gate::RxxPlusYy { a, b, theta }
                }
            }
            other => return Err(format!("unknown gate kind {other:?}")),
        };
        Ok(gate)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (q0, q1) = self.qubits();
        write!(f, "{} {q0}", self.kind())?;
        if let Some(q1) = q1 {
            write!(f, ",{q1}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, ",{a:?}")?;
        }
        Ok(())
    }
}
