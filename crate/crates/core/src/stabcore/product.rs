use super::PauliOperator;
use crate::{Error, Result};

const BLOCH_SLACK: f64 = 1e-12;

/// An n-qubit product state given by one Bloch vector per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    bloch: Vec<[f64; 3]>,
}

impl ProductState {
    pub fn new(bloch: Vec<[f64; 3]>) -> Result<Self> {
        for (q, r) in bloch.iter().enumerate() {
            if r.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(format!("qubit {q}: non-finite Bloch vector")));
            }
            let norm2 = r.iter().map(|c| c * c).sum::<f64>();
            if norm2 > 1.0 + BLOCH_SLACK {
                return Err(Error::InvalidParameter(format!(
                    "qubit {q}: Bloch vector length {} exceeds 1",
                    norm2.sqrt()
                )));
            }
        }
        Ok(ProductState { bloch })
    }

    /// `|0…0⟩`
    pub fn zeros(n: usize) -> Self {
        ProductState {
            bloch: vec![[0.0, 0.0, 1.0]; n],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.bloch.len()
    }

    pub fn bloch(&self, q: usize) -> [f64; 3] {
        self.bloch[q]
    }

    pub fn bloch_vectors(&self) -> &[[f64; 3]] {
        &self.bloch
    }

    pub fn set_bloch(&mut self, q: usize, r: [f64; 3]) -> Result<()> {
        let norm2 = r.iter().map(|c| c * c).sum::<f64>();
        if norm2 > 1.0 + BLOCH_SLACK || r.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!("qubit {q}: invalid Bloch vector {r:?}")));
        }
        self.bloch[q] = r;
        Ok(())
    }

    pub fn is_pure(&self) -> bool {
        self.bloch
            .iter()
            .all(|r| (r.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-9)
    }

    /// `tr(ρ P) = sign · ∏ tr(ρ_i P_i)`.
    pub fn expectation(&self, p: &PauliOperator) -> Result<f64> {
        if p.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                found: p.num_qubits(),
            });
        }
        let mut value = p.sign() as f64;
        for (q, r) in self.bloch.iter().enumerate() {
            value *= match (p.x_bit(q), p.z_bit(q)) {
                (false, false) => continue,
                (true, false) => r[0],
                (true, true) => r[1],
                (false, true) => r[2],
            };
            if value == 0.0 {
                break;
            }
        }
        Ok(value)
    }
}

/// Free-function form of [`ProductState::expectation`].
pub fn product_expectation(state: &ProductState, p: &PauliOperator) -> Result<f64> {
    state.expectation(p)
}

/// Bloch vector of `g_k ⋯ g_1 |0⟩` for a word of single-qubit gates applied
/// left to right. Accepts `H S Sdg T Tdg X Y Z`.
pub fn bloch_from_gate_word<S: AsRef<str>>(word: &[S]) -> Result<[f64; 3]> {
    let mut r = [0.0, 0.0, 1.0];
    let rot_z = |r: [f64; 3], angle: f64| {
        let (s, c) = angle.sin_cos();
        [c * r[0] - s * r[1], s * r[0] + c * r[1], r[2]]
    };
    for g in word {
        r = match g.as_ref() {
            "H" => [r[2], -r[1], r[0]],
            "S" => [-r[1], r[0], r[2]],
            "Sdg" => [r[1], -r[0], r[2]],
            "T" => rot_z(r, std::f64::consts::FRAC_PI_4),
            "Tdg" => rot_z(r, -std::f64::consts::FRAC_PI_4),
            "X" => [r[0], -r[1], -r[2]],
            "Y" => [-r[0], r[1], -r[2]],
            "Z" => [-r[0], -r[1], r[2]],
            other => return Err(Error::UnknownGate(other.to_string())),
        };
    }
    Ok(r)
}
