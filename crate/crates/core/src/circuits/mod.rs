//! Circuit families, outcome patterns and the line-based circuit format.
//!
//! Measured qubits are always the first `k` qubits of the register; patterns
//! and outcomes refer to measured qubits only.

mod format;
mod pattern;

use std::fmt;

pub use format::{parse_circuit, parse_circuit_file, parse_circuit_with_base, serialize_circuit};
pub use pattern::{Outcome, OutcomePattern, Trit, MAX_MEASURED};

use crate::stabcore::{CliffordTableau, Gate, ProductState};
use crate::{Error, Result};

/// Dense binary matrix with at most 64 columns; row `i` is a column bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn new(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > 64 {
            return Err(Error::InvalidParameter("binary matrices support at most 64 columns".into()));
        }
        let mask = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::InvalidParameter("row has bits beyond the column count".into()));
        }
        Ok(BinaryMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(cols, vec![0; rows])
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut packed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            let mut bits = 0u64;
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => bits |= 1 << j,
                    _ => return Err(Error::InvalidParameter(format!("matrix entry {b} is not binary"))),
                }
            }
            packed.push(bits);
        }
        Self::new(cols, packed)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }
}

/// Product-state input, Clifford gates, computational-basis measurement of
/// the first `measured` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ProdCircuit {
    prep: ProductState,
    gates: Vec<Gate>,
    measured: usize,
}

impl ProdCircuit {
    pub fn new(prep: ProductState, gates: Vec<Gate>, measured: usize) -> Result<Self> {
        let n = prep.num_qubits();
        if measured == 0 || measured > n || measured > MAX_MEASURED {
            return Err(Error::InvalidParameter(format!(
                "measured count {measured} must satisfy 1 <= k <= n = {n}"
            )));
        }
        for g in &gates {
            g.validate(n)?;
        }
        Ok(ProdCircuit { prep, gates, measured })
    }

    pub fn num_qubits(&self) -> usize {
        self.prep.num_qubits()
    }

    pub fn measured(&self) -> usize {
        self.measured
    }

    pub fn prep(&self) -> &ProductState {
        &self.prep
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Tableau of the circuit's Clifford unitary.
    pub fn tableau(&self) -> CliffordTableau {
        CliffordTableau::from_gates(self.num_qubits(), &self.gates).expect("gates validated on construction")
    }
}

/// X-program: `U = ∏_i exp(i π/4 ⊗_j X^{P_ij})` applied to `|0^n⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqpCircuit {
    program: BinaryMatrix,
    measured: usize,
}

impl IqpCircuit {
    pub fn new(program: BinaryMatrix, measured: usize) -> Result<Self> {
        let n = program.num_cols();
        if n == 0 {
            return Err(Error::InvalidParameter("IQP circuit needs at least one qubit".into()));
        }
        if measured == 0 || measured > n {
            return Err(Error::InvalidParameter(format!(
                "measured count {measured} must satisfy 1 <= k <= n = {n}"
            )));
        }
        Ok(IqpCircuit { program, measured })
    }

    pub fn num_qubits(&self) -> usize {
        self.program.num_cols()
    }

    pub fn measured(&self) -> usize {
        self.measured
    }

    pub fn program(&self) -> &BinaryMatrix {
        &self.program
    }
}

/// Outputs `(X ⊕ Par(Y), Y)` where `X` is the first measured bit of the inner
/// circuit and `Y` is uniform over `n` bits, `n` being the inner measured count.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedCircuit {
    inner: Box<Circuit>,
}

impl EncodedCircuit {
    pub fn inner(&self) -> &Circuit {
        &self.inner
    }

    /// Length of the uniform tail `Y`.
    pub fn tail_len(&self) -> usize {
        self.inner.measured()
    }

    pub fn measured(&self) -> usize {
        self.tail_len() + 1
    }
}

/// Wraps `inner` in the parity encoding.
pub fn ce_encode(inner: Circuit) -> Result<EncodedCircuit> {
    if inner.measured() == 0 {
        return Err(Error::InvalidParameter("inner circuit measures no qubits".into()));
    }
    if inner.measured() + 1 > MAX_MEASURED {
        return Err(Error::InvalidParameter("encoded outcome exceeds 64 bits".into()));
    }
    Ok(EncodedCircuit { inner: Box::new(inner) })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Circuit {
    Prod(ProdCircuit),
    Iqp(IqpCircuit),
    Encoded(EncodedCircuit),
}

impl Circuit {
    /// Number of measured bits `k` (length of outcomes and patterns).
    pub fn measured(&self) -> usize {
        match self {
            Circuit::Prod(c) => c.measured(),
            Circuit::Iqp(c) => c.measured(),
            Circuit::Encoded(c) => c.measured(),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Circuit::Prod(_) => "prod",
            Circuit::Iqp(_) => "iqp",
            Circuit::Encoded(_) => "encoded",
        }
    }

    pub fn check_pattern(&self, pattern: &OutcomePattern) -> Result<()> {
        pattern.check_len(self.measured())
    }
}

impl From<ProdCircuit> for Circuit {
    fn from(c: ProdCircuit) -> Self {
        Circuit::Prod(c)
    }
}

impl From<IqpCircuit> for Circuit {
    fn from(c: IqpCircuit) -> Self {
        Circuit::Iqp(c)
    }
}

impl From<EncodedCircuit> for Circuit {
    fn from(c: EncodedCircuit) -> Self {
        Circuit::Encoded(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_circuit(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measured_count_bounds() {
        assert!(ProdCircuit::new(ProductState::zeros(2), vec![], 3).is_err());
        assert!(ProdCircuit::new(ProductState::zeros(2), vec![], 0).is_err());
        assert!(ProdCircuit::new(ProductState::zeros(2), vec![Gate::H(2)], 1).is_err());
        let m = BinaryMatrix::from_rows(&[vec![1, 0, 1]]).unwrap();
        assert!(IqpCircuit::new(m.clone(), 4).is_err());
        assert_eq!(IqpCircuit::new(m, 3).unwrap().num_qubits(), 3);
    }

    #[test]
    fn binary_matrix_validation() {
        assert!(BinaryMatrix::from_rows(&[vec![1, 2]]).is_err());
        assert!(BinaryMatrix::from_rows(&[vec![1, 0], vec![1]]).is_err());
        let m = BinaryMatrix::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
        assert!(m.get(0, 1) && !m.get(0, 0));
        assert_eq!(m.row(1), 0b11);
    }

    #[test]
    fn encoding_lengths() {
        let inner: Circuit = ProdCircuit::new(ProductState::zeros(3), vec![], 2).unwrap().into();
        let e = ce_encode(inner).unwrap();
        assert_eq!(e.tail_len(), 2);
        assert_eq!(Circuit::from(e).measured(), 3);
    }
}
