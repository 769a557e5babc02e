use num_complex::Complex64;

use crate::stabcore::{CliffordTableau, Gate, PauliOperator, ProductState};
use crate::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;

/// Dense pure state. Qubit `q` is bit `n - 1 - q` of the basis index, so the
/// first `k` qubits form the top `k` bits and marginals over trailing qubits
/// are contiguous blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidParameter("amplitude count must be a power of two".into()));
        }
        let n = amps.len().trailing_zeros() as usize;
        let sv = StateVector { n, amps };
        if (sv.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("state norm² {} is not 1", sv.norm_sqr())));
        }
        Ok(sv)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Product of single-qubit pure states given by unit Bloch vectors.
    pub fn pure_product(state: &ProductState) -> Result<Self> {
        if !state.is_pure() {
            return Err(Error::InvalidParameter("product state is not pure".into()));
        }
        let factors: Vec<[Complex64; 2]> = state.bloch_vectors().iter().map(|&r| bloch_ket(r)).collect();
        Ok(Self::tensor(&factors))
    }

    fn tensor(factors: &[[Complex64; 2]]) -> Self {
        let n = factors.len();
        let amps = (0..1usize << n)
            .map(|idx| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(q, f)| f[(idx >> (n - 1 - q)) & 1])
                    .product()
            })
            .collect();
        StateVector { n, amps }
    }

    /// Purification of a (possibly mixed) product state. Each mixed qubit `q`
    /// gets an ancilla appended after the system register; the reduced state
    /// on the first `state.num_qubits()` qubits equals `state`.
    pub fn purified_product(state: &ProductState) -> Self {
        let n = state.num_qubits();
        // (system qubit, weights and kets of the two eigen-branches)
        let mut mixed: Vec<(usize, [f64; 2], [[Complex64; 2]; 2])> = Vec::new();
        let mut pure: Vec<Option<[Complex64; 2]>> = vec![None; n];
        for (q, &r) in state.bloch_vectors().iter().enumerate() {
            let len = r.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (len - 1.0).abs() < 1e-12 {
                pure[q] = Some(bloch_ket(r));
            } else {
                let axis = if len > 0.0 {
                    [r[0] / len, r[1] / len, r[2] / len]
                } else {
                    [0.0, 0.0, 1.0]
                };
                let lambda = (1.0 + len) / 2.0;
                let plus = bloch_ket(axis);
                let minus = bloch_ket([-axis[0], -axis[1], -axis[2]]);
                mixed.push((q, [lambda.sqrt(), (1.0 - lambda).sqrt()], [plus, minus]));
            }
        }
        let total = n + mixed.len();
        let amps = (0..1usize << total)
            .map(|idx| {
                let bit = |q: usize| (idx >> (total - 1 - q)) & 1;
                let mut a = Complex64::new(1.0, 0.0);
                for (q, f) in pure.iter().enumerate() {
                    if let Some(f) = f {
                        a *= f[bit(q)];
                    }
                }
                for (slot, (q, w, kets)) in mixed.iter().enumerate() {
                    let branch = bit(n + slot);
                    a *= kets[branch][bit(*q)] * w[branch];
                }
                a
            })
            .collect();
        StateVector { n: total, amps }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(q) => {
                let m = self.bit(q);
                for idx in 0..self.amps.len() {
                    if idx & m == 0 {
                        let (a, b) = (self.amps[idx], self.amps[idx | m]);
                        self.amps[idx] = (a + b) * s;
                        self.amps[idx | m] = (a - b) * s;
                    }
                }
            }
            Gate::S(q) => {
                let m = self.bit(q);
                for (idx, a) in self.amps.iter_mut().enumerate() {
                    if idx & m != 0 {
                        *a *= Complex64::i();
                    }
                }
            }
            Gate::X(q) => {
                let m = self.bit(q);
                for idx in 0..self.amps.len() {
                    if idx & m == 0 {
                        self.amps.swap(idx, idx | m);
                    }
                }
            }
            Gate::Z(q) => {
                let m = self.bit(q);
                for (idx, a) in self.amps.iter_mut().enumerate() {
                    if idx & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let (mc, mt) = (self.bit(c), self.bit(t));
                for idx in 0..self.amps.len() {
                    if idx & mc != 0 && idx & mt == 0 {
                        self.amps.swap(idx, idx | mt);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let m = self.bit(a) | self.bit(b);
                for (idx, amp) in self.amps.iter_mut().enumerate() {
                    if idx & m == m {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    /// `exp(i θ X^mask)` where bit `q` of `qubit_mask` selects qubit `q`.
    pub fn apply_x_rotation(&mut self, qubit_mask: u64, theta: f64) {
        let flip = (0..self.n)
            .filter(|&q| (qubit_mask >> q) & 1 == 1)
            .fold(0usize, |acc, q| acc | self.bit(q));
        let (c, s) = (theta.cos(), theta.sin());
        let old = self.amps.clone();
        for (idx, a) in self.amps.iter_mut().enumerate() {
            *a = old[idx] * c + Complex64::i() * s * old[idx ^ flip];
        }
    }

    /// `|ψ⟩ ↦ P|ψ⟩`.
    pub fn apply_pauli(&self, p: &PauliOperator) -> Result<StateVector> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let (mut xmask, mut zmask, mut ys) = (0usize, 0usize, 0u32);
        for q in 0..self.n {
            if p.x_bit(q) {
                xmask |= self.bit(q);
            }
            if p.z_bit(q) {
                zmask |= self.bit(q);
            }
            if p.x_bit(q) && p.z_bit(q) {
                ys += 1;
            }
        }
        let mut global = Complex64::i().powu(ys);
        if p.is_negative() {
            global = -global;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let sign = if (idx & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[idx ^ xmask] = a * global * sign;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    /// Probabilities of the `2^k` outcomes of the first `k` qubits.
    pub fn leading_probabilities(&self, k: usize) -> Vec<f64> {
        let shift = self.n - k;
        let mut probs = vec![0.0; 1 << k];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[idx >> shift] += a.norm_sqr();
        }
        probs
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` for a unit Bloch vector.
fn bloch_ket(r: [f64; 3]) -> [Complex64; 2] {
    let theta = r[2].clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// `U|ψ⟩` for the Clifford `U` of `t` and a pure product state `|ψ⟩`, built
/// from the tableau alone: `U|0⟩` is the joint +1 eigenstate of the images of
/// `Z_q`, and `U(a|0⟩ + b|1⟩)_q = (a + b·U X_q U†) U|0⟩` factor by factor.
/// The global phase is arbitrary.
pub fn clifford_output_state(t: &CliffordTableau, input: &ProductState) -> Result<StateVector> {
    let n = t.num_qubits();
    if input.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: input.num_qubits(),
        });
    }
    let kets: Vec<[Complex64; 2]> = if input.is_pure() {
        input.bloch_vectors().iter().map(|&r| bloch_ket(r)).collect()
    } else {
        return Err(Error::InvalidParameter("clifford_output_state needs a pure input".into()));
    };

    let threshold = 0.5 / (1u64 << n) as f64;
    let mut stab = None;
    for b in 0..1usize << n {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[b] = Complex64::new(1.0, 0.0);
        let mut sv = StateVector { n, amps: v };
        for q in 0..n {
            let g = sv.apply_pauli(t.z_image(q))?;
            for (a, ga) in sv.amps.iter_mut().zip(&g.amps) {
                *a = (*a + ga) * 0.5;
            }
        }
        let norm = sv.norm_sqr();
        if norm > threshold {
            let scale = 1.0 / norm.sqrt();
            sv.amps.iter_mut().for_each(|a| *a *= scale);
            stab = Some(sv);
            break;
        }
    }
    let mut state = stab.expect("stabilizer state overlaps some basis state");
    for (q, k) in kets.iter().enumerate() {
        let flipped = state.apply_pauli(t.x_image(q))?;
        for (a, f) in state.amps.iter_mut().zip(&flipped.amps) {
            *a = *a * k[0] + f * k[1];
        }
    }
    Ok(state)
}
