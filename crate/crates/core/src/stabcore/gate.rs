use std::fmt;

use crate::{Error, Result};

/// A Clifford gate application from the circuit gate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    /// Builds a gate from its mnemonic and qubit indices, e.g. `("CNOT", [0, 1])`.
    pub fn from_name(name: &str, qubits: &[usize]) -> Result<Gate> {
        let arity = match name {
            "H" | "S" | "X" | "Z" => 1,
            "CNOT" | "CX" | "CZ" => 2,
            _ => return Err(Error::UnknownGate(name.to_string())),
        };
        if qubits.len() != arity {
            return Err(Error::InvalidParameter(format!(
                "gate {name} takes {arity} qubit index(es), got {}",
                qubits.len()
            )));
        }
        let gate = match name {
            "H" => Gate::H(qubits[0]),
            "S" => Gate::S(qubits[0]),
            "X" => Gate::X(qubits[0]),
            "Z" => Gate::Z(qubits[0]),
            "CNOT" | "CX" => Gate::Cnot(qubits[0], qubits[1]),
            _ => Gate::Cz(qubits[0], qubits[1]),
        };
        if let Gate::Cnot(a, b) | Gate::Cz(a, b) = gate {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        Ok(gate)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Cnot(..) => "CNOT",
            Gate::Cz(..) => "CZ",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
        }
    }

    /// Checks indices against a register of `n` qubits.
    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, qubits: n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::RepeatedQubit(qs[0]));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}
