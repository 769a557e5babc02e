use num_complex::Complex64;

use crate::stabcore::{Gate, PauliOperator};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix in row-major order, indexed like `StateVector`
/// (qubit `q` is bit `n - 1 - q`).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        DenseMatrix { dim, data }
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect::<Vec<_>>();
        assert_eq!(data.len(), dim * dim, "matrix must be square");
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Self {
        let d = self.dim;
        assert_eq!(d, other.dim);
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        DenseMatrix { dim: d, data }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        DenseMatrix { dim: d, data }
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &DenseMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut data = vec![ZERO; d * d];
        for i1 in 0..a {
            for j1 in 0..a {
                let x = self.data[i1 * a + j1];
                for i2 in 0..b {
                    for j2 in 0..b {
                        data[(i1 * b + i2) * d + j1 * b + j2] = x * other.data[i2 * b + j2];
                    }
                }
            }
        }
        DenseMatrix { dim: d, data }
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn single(m: [[Complex64; 2]; 2]) -> DenseMatrix {
    DenseMatrix::from_rows(&[&m[0], &m[1]])
}

fn id2() -> DenseMatrix {
    DenseMatrix::identity(2)
}

fn pauli_1q(x: bool, z: bool) -> DenseMatrix {
    match (x, z) {
        (false, false) => id2(),
        (true, false) => single([[ZERO, ONE], [ONE, ZERO]]),
        (false, true) => single([[ONE, ZERO], [ZERO, -ONE]]),
        (true, true) => single([[ZERO, -I], [I, ZERO]]),
    }
}

/// Dense matrix of a signed Hermitian Pauli (`x = z = 1` is `Y`).
pub fn pauli_matrix(p: &PauliOperator) -> DenseMatrix {
    let mut out = DenseMatrix::identity(1);
    for q in 0..p.num_qubits() {
        out = out.kron(&pauli_1q(p.x_bit(q), p.z_bit(q)));
    }
    if p.is_negative() {
        out = out.scale(-ONE);
    }
    out
}

/// Dense `2^n × 2^n` unitary of a gate.
pub fn gate_matrix(gate: &Gate, n: usize) -> Result<DenseMatrix> {
    gate.validate(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one_qubit = |q: usize, m: DenseMatrix| {
        let mut out = DenseMatrix::identity(1);
        for j in 0..n {
            out = out.kron(&if j == q { m.clone() } else { id2() });
        }
        out
    };
    let dim = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    Ok(match *gate {
        Gate::H(q) => one_qubit(q, single([[ONE * h, ONE * h], [ONE * h, -ONE * h]])),
        Gate::S(q) => one_qubit(q, single([[ONE, ZERO], [ZERO, I]])),
        Gate::X(q) => one_qubit(q, pauli_1q(true, false)),
        Gate::Z(q) => one_qubit(q, pauli_1q(false, true)),
        Gate::Cnot(c, t) => {
            let mut data = vec![ZERO; dim * dim];
            for col in 0..dim {
                let row = if col & bit(c) != 0 { col ^ bit(t) } else { col };
                data[row * dim + col] = ONE;
            }
            DenseMatrix { dim, data }
        }
        Gate::Cz(a, b) => {
            let mut data = vec![ZERO; dim * dim];
            for i in 0..dim {
                let both = i & bit(a) != 0 && i & bit(b) != 0;
                data[i * dim + i] = if both { -ONE } else { ONE };
            }
            DenseMatrix { dim, data }
        }
    })
}

/// Reads a dense Hermitian matrix back as a signed Pauli, if it is one.
pub fn matrix_to_pauli(m: &DenseMatrix, n: usize) -> Result<PauliOperator> {
    let dim = 1usize << n;
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    for xs in 0..dim {
        for zs in 0..dim {
            let x: Vec<bool> = (0..n).map(|q| (xs >> q) & 1 == 1).collect();
            let z: Vec<bool> = (0..n).map(|q| (zs >> q) & 1 == 1).collect();
            for negative in [false, true] {
                let p = PauliOperator::from_bits(&x, &z, negative)?;
                if pauli_matrix(&p).max_abs_diff(m) < 1e-9 {
                    return Ok(p);
                }
            }
        }
    }
    Err(Error::InvalidParameter("matrix is not a signed Pauli".into()))
}
