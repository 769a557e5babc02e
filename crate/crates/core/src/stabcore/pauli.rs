use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A Hermitian n-qubit Pauli operator `±P_1 ⊗ … ⊗ P_n`.
///
/// Qubit `i` carries the pair `(x_i, z_i)`: `(0,0)=I`, `(1,0)=X`, `(0,1)=Z`,
/// `(1,1)=Y`. The `i` relating `Y` to `XZ` is absorbed into the encoding, so
/// the stored operator is always Hermitian and squares to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            negative: false,
        }
    }

    /// Single-qubit `X` on `qubit`.
    pub fn x_on(n: usize, qubit: usize) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, true, false);
        p
    }

    pub fn z_on(n: usize, qubit: usize) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, false, true);
        p
    }

    pub fn from_bits(x: &[bool], z: &[bool], negative: bool) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        let mut p = Self::identity(x.len());
        for (i, (&xi, &zi)) in x.iter().zip(z).enumerate() {
            p.set(i, xi, zi);
        }
        p.negative = negative;
        Ok(p)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn set_negative(&mut self, negative: bool) {
        self.negative = negative;
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    #[inline]
    pub fn x_bit(&self, qubit: usize) -> bool {
        (self.x[qubit / 64] >> (qubit % 64)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, qubit: usize) -> bool {
        (self.z[qubit / 64] >> (qubit % 64)) & 1 == 1
    }

    pub fn set(&mut self, qubit: usize, x: bool, z: bool) {
        let (w, b) = (qubit / 64, qubit % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    /// Resets to `+I` without reallocating.
    pub(crate) fn clear(&mut self) {
        self.x.fill(0);
        self.z.fill(0);
        self.negative = false;
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        parity & 1 == 0
    }

    /// Multiplies `self` on the right by `rhs` and returns the power `e` of
    /// `i` such that `self_old · rhs = i^e · self_new` (signs included).
    pub(crate) fn mul_assign_phase(&mut self, rhs: &PauliOperator) -> u8 {
        debug_assert_eq!(self.n, rhs.n);
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], rhs.x[w], rhs.z[w]);
            let (xo1, yo1, zo1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (xo2, yo2, zo2) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((yo1 & zo2) | (xo1 & yo2) | (zo1 & xo2)).count_ones();
            minus += ((yo1 & xo2) | (xo1 & zo2) | (zo1 & yo2)).count_ones();
            self.x[w] = x1 ^ x2;
            self.z[w] = z1 ^ z2;
        }
        let signs = 2 * (self.negative as u32 + rhs.negative as u32);
        self.negative = false;
        ((plus + 3 * minus + signs) % 4) as u8
    }

    /// Product of two commuting operators (which is again Hermitian).
    pub fn mul_commuting(&self, rhs: &PauliOperator) -> Result<PauliOperator> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        let mut out = self.clone();
        let phase = out.mul_assign_phase(rhs);
        match phase {
            0 => {}
            2 => out.negative = true,
            _ => {
                return Err(Error::InvalidParameter(
                    "product of anticommuting Paulis is not Hermitian".into(),
                ))
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for i in 0..self.n {
            let c = match (self.x_bit(i), self.z_bit(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses strings such as `+XIZ`, `-YY` or `ZZ` (leading sign optional).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = PauliOperator::identity(body.len());
        for (i, c) in body.chars().enumerate() {
            let (x, z) = match c {
                'I' | 'i' => (false, false),
                'X' | 'x' => (true, false),
                'Z' | 'z' => (false, true),
                'Y' | 'y' => (true, true),
                _ => return Err(Error::InvalidParameter(format!("bad Pauli letter `{c}`"))),
            };
            p.set(i, x, z);
        }
        p.negative = negative;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        // XZ = -iY, ZX = iY, XY = iZ, YX = -iZ
        let mut a = p("X");
        assert_eq!(a.mul_assign_phase(&p("Z")), 3);
        assert_eq!(a, p("Y"));
        let mut a = p("Z");
        assert_eq!(a.mul_assign_phase(&p("X")), 1);
        assert_eq!(a, p("Y"));
        let mut a = p("X");
        assert_eq!(a.mul_assign_phase(&p("Y")), 1);
        assert_eq!(a, p("Z"));
        let mut a = p("-Y");
        assert_eq!(a.mul_assign_phase(&p("X")), 1); // -YX = iZ
        assert_eq!(a, p("Z"));
    }

    #[test]
    fn commuting_products_are_hermitian() {
        assert_eq!(p("XX").mul_commuting(&p("ZZ")).unwrap(), p("-YY"));
        assert_eq!(p("-ZI").mul_commuting(&p("IZ")).unwrap(), p("-ZZ"));
        assert!(p("X").mul_commuting(&p("Z")).is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["+IXYZ", "-ZZ", "+I"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XZ").weight(), 2);
        assert!(p("XX").commutes_with(&p("ZZ")));
        assert!(!p("XI").commutes_with(&p("ZZ")));
    }

    #[test]
    fn wide_operators_span_words() {
        let mut a = PauliOperator::x_on(130, 129);
        a.set(64, true, true);
        assert!(a.x_bit(129) && a.x_bit(64) && a.z_bit(64) && !a.z_bit(129));
        assert_eq!(a.weight(), 2);
        let b = PauliOperator::z_on(130, 129);
        assert!(!a.commutes_with(&b));
    }
}
