use std::fmt;

use super::{Gate, PauliOperator};
use crate::{Error, Result};

/// A Clifford unitary `U` stored as the images `U G U†` of the generators
/// `X_1..X_n, Z_1..Z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    images: Vec<PauliOperator>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let images = (0..n)
            .map(|q| PauliOperator::x_on(n, q))
            .chain((0..n).map(|q| PauliOperator::z_on(n, q)))
            .collect();
        CliffordTableau { n, images }
    }

    /// Builds a tableau from generator images, `x_images[i] = U X_i U†` and
    /// `z_images[i] = U Z_i U†`. Fails if the images are not symplectic.
    pub fn from_images(x_images: Vec<PauliOperator>, z_images: Vec<PauliOperator>) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: z_images.len(),
            });
        }
        if let Some(p) = x_images.iter().chain(&z_images).find(|p| p.num_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.num_qubits(),
            });
        }
        let mut images = x_images;
        images.extend(z_images);
        let t = CliffordTableau { n, images };
        if !t.is_symplectic() {
            return Err(Error::InvalidParameter(
                "generator images violate the symplectic commutation relations".into(),
            ));
        }
        Ok(t)
    }

    /// Tableau of the gate sequence `g_k ⋯ g_1` (first gate applied first).
    pub fn from_gates<'a>(n: usize, gates: impl IntoIterator<Item = &'a Gate>) -> Result<Self> {
        let mut t = Self::identity(n);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `U X_q U†`
    pub fn x_image(&self, q: usize) -> &PauliOperator {
        &self.images[q]
    }

    /// `U Z_q U†`
    pub fn z_image(&self, q: usize) -> &PauliOperator {
        &self.images[self.n + q]
    }

    #[cfg(test)]
    pub(crate) fn images(&self) -> &[PauliOperator] {
        &self.images
    }

    /// Image `X_i` anticommutes with image `Z_i`; every other pair commutes.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let should_anticommute = b == a + n && a < n;
                if self.images[a].commutes_with(&self.images[b]) == should_anticommute {
                    return false;
                }
            }
        }
        true
    }

    /// Replaces `U` by `g·U`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        for p in &mut self.images {
            conjugate_by_gate(p, gate);
        }
        Ok(())
    }

    /// Computes `U P U†`.
    pub fn apply(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let mut acc = PauliOperator::identity(self.n);
        let mut phase = 0u32;
        for q in 0..self.n {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x && z {
                phase += 1; // Y = iXZ
            }
            if x {
                phase += acc.mul_assign_phase(&self.images[q]) as u32;
            }
            if z {
                phase += acc.mul_assign_phase(&self.images[self.n + q]) as u32;
            }
        }
        if p.is_negative() {
            phase += 2;
        }
        match phase % 4 {
            0 => {}
            2 => acc.set_negative(true),
            // conjugation preserves Hermiticity, so an odd phase means a corrupt tableau
            _ => unreachable!("non-Hermitian image from a symplectic tableau"),
        }
        Ok(acc)
    }

    /// Tableau of `U†`.
    pub fn inverse(&self) -> CliffordTableau {
        let n = self.n;
        // For symplectic M, the coefficient of X_j in M⁻¹G is ω(G, M Z_j) and
        // the coefficient of Z_j is ω(G, M X_j).
        let mut images = Vec::with_capacity(2 * n);
        for generator in 0..2 * n {
            let q = generator % n;
            let is_x = generator < n;
            let mut p = PauliOperator::identity(n);
            for j in 0..n {
                let (zx, xx) = if is_x {
                    (self.z_image(j).z_bit(q), self.x_image(j).z_bit(q))
                } else {
                    (self.z_image(j).x_bit(q), self.x_image(j).x_bit(q))
                };
                p.set(j, zx, xx);
            }
            images.push(p);
        }
        let mut inv = CliffordTableau { n, images };
        for generator in 0..2 * n {
            let forward = self
                .apply(&inv.images[generator])
                .expect("dimensions agree by construction");
            if forward.is_negative() {
                inv.images[generator].negate();
            }
        }
        inv
    }

    /// Tableau of `V·U` where `self = U` and `other = V`.
    pub fn then(&self, other: &CliffordTableau) -> Result<CliffordTableau> {
        let images = self
            .images
            .iter()
            .map(|p| other.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(CliffordTableau { n: self.n, images })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }
}

/// `U†PU` for the unitary `U` represented by `t`.
pub fn conjugate_pauli(t: &CliffordTableau, p: &PauliOperator) -> Result<PauliOperator> {
    t.inverse().apply(p)
}

/// In-place `P ↦ g P g†` on a single operator.
fn conjugate_by_gate(p: &mut PauliOperator, gate: &Gate) {
    match *gate {
        Gate::H(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x && z {
                p.negate();
            }
            p.set(q, z, x);
        }
        Gate::S(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            if x && z {
                p.negate();
            }
            p.set(q, x, z ^ x);
        }
        Gate::X(q) => {
            if p.z_bit(q) {
                p.negate();
            }
        }
        Gate::Z(q) => {
            if p.x_bit(q) {
                p.negate();
            }
        }
        Gate::Cnot(c, t) => {
            let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
            if xc && zt && !(xt ^ zc) {
                p.negate();
            }
            p.set(t, xt ^ xc, zt);
            p.set(c, xc, zc ^ zt);
        }
        Gate::Cz(a, b) => {
            let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
            if xa && xb && (za ^ zb) {
                p.negate();
            }
            p.set(a, xa, za ^ xb);
            p.set(b, xb, zb ^ xa);
        }
    }
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            writeln!(f, "X{q} -> {}", self.x_image(q))?;
        }
        for q in 0..self.n {
            writeln!(f, "Z{q} -> {}", self.z_image(q))?;
        }
        Ok(())
    }
}
