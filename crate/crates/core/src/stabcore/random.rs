//! Exactly uniform sampling from the n-qubit Clifford group (modulo global
//! phase).
//!
//! The symplectic part is drawn one symplectic pair at a time: the image `v`
//! of `X_1` is uniform over nonzero vectors, the image `w` of `Z_1` is uniform
//! over vectors with `ω(v, w) = 1`, and the remaining generators are mapped by
//! a recursively drawn symplectic matrix into a fixed symplectic basis of the
//! complement of `span{v, w}`. Each step is a bijection onto a coset of the
//! stabiliser subgroup, so the product is uniform on `Sp(2n, 2)`. Signs are
//! `2n` independent fair bits.

use rand::Rng;

use super::{CliffordTableau, PauliOperator};
use crate::{Error, Result};

/// Largest register supported; symplectic vectors are packed into one `u64`.
pub const MAX_RANDOM_CLIFFORD_QUBITS: usize = 31;

/// Symplectic vector: bits `0..n` are x, bits `n..2n` are z.
type SymVec = u64;

#[inline]
fn omega(a: SymVec, b: SymVec, n: usize) -> bool {
    let mask = (1u64 << n) - 1;
    let (ax, az, bx, bz) = (a & mask, a >> n, b & mask, b >> n);
    ((ax & bz) ^ (az & bx)).count_ones() & 1 == 1
}

/// A vector `u` with `ω(v, u) = 1` for nonzero `v`.
fn partner_unit(v: SymVec, n: usize) -> SymVec {
    let low = v.trailing_zeros() as usize;
    if low < n {
        1 << (low + n)
    } else {
        1 << (low - n)
    }
}

/// Completes the pair `(v, w)` to a symplectic basis; returns the other
/// `n - 1` pairs in a deterministic order.
fn complement_basis(v: SymVec, w: SymVec, n: usize) -> Vec<(SymVec, SymVec)> {
    let project = |u: SymVec, a: SymVec, b: SymVec| -> SymVec {
        let mut out = u;
        if omega(u, b, n) {
            out ^= a;
        }
        if omega(u, a, n) {
            out ^= b;
        }
        out
    };
    let mut pool: Vec<SymVec> = (0..2 * n)
        .map(|i| project(1u64 << i, v, w))
        .filter(|&u| u != 0)
        .collect();
    let mut pairs = Vec::with_capacity(n.saturating_sub(1));
    while pairs.len() + 1 < n {
        let a = pool[0];
        let b = *pool
            .iter()
            .find(|&&u| omega(a, u, n))
            .expect("complement of a symplectic pair is nondegenerate");
        pairs.push((a, b));
        pool = pool
            .into_iter()
            .map(|u| project(u, a, b))
            .filter(|&u| u != 0)
            .collect();
    }
    pairs
}

/// Uniform symplectic matrix as `(x images, z images)`.
fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<SymVec>, Vec<SymVec>) {
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let full = 1u64 << (2 * n);
    let v = rng.gen_range(1..full);
    let mut w = rng.gen_range(0..full);
    if !omega(v, w, n) {
        w ^= partner_unit(v, n);
    }
    let basis = complement_basis(v, w, n);
    let (sub_x, sub_z) = random_symplectic(n - 1, rng);

    let m = n - 1;
    let embed = |u: SymVec| -> SymVec {
        let mut out = 0;
        for (j, &(a, b)) in basis.iter().enumerate() {
            if (u >> j) & 1 == 1 {
                out ^= a;
            }
            if (u >> (j + m)) & 1 == 1 {
                out ^= b;
            }
        }
        out
    };
    let mut xs = vec![v];
    let mut zs = vec![w];
    xs.extend(sub_x.into_iter().map(embed));
    zs.extend(sub_z.into_iter().map(embed));
    (xs, zs)
}

fn to_pauli(u: SymVec, n: usize, negative: bool) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for q in 0..n {
        p.set(q, (u >> q) & 1 == 1, (u >> (q + n)) & 1 == 1);
    }
    p.set_negative(negative);
    p
}

/// Draws a Clifford tableau uniformly at random.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CliffordTableau> {
    if n == 0 {
        return Err(Error::InvalidParameter("random Clifford needs n >= 1".into()));
    }
    if n > MAX_RANDOM_CLIFFORD_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "random Clifford supports at most {MAX_RANDOM_CLIFFORD_QUBITS} qubits"
        )));
    }
    let (xs, zs) = random_symplectic(n, rng);
    let x_images = xs.into_iter().map(|u| to_pauli(u, n, rng.gen())).collect();
    let z_images = zs.into_iter().map(|u| to_pauli(u, n, rng.gen())).collect();
    CliffordTableau::from_images(x_images, z_images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use std::collections::HashSet;

    #[test]
    fn zero_qubits_is_an_error() {
        assert!(random_clifford(0, &mut stream(1, 0)).is_err());
    }

    #[test]
    fn draws_are_symplectic_and_deterministic() {
        for n in 1..=8 {
            let a = random_clifford(n, &mut stream(5, n as u64)).unwrap();
            let b = random_clifford(n, &mut stream(5, n as u64)).unwrap();
            assert!(a.is_symplectic());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reaches_the_whole_two_qubit_symplectic_group() {
        // |Sp(4, 2)| = 720
        let mut rng = stream(11, 0);
        let mut seen = HashSet::new();
        for _ in 0..40_000 {
            let t = random_clifford(2, &mut rng).unwrap();
            let key: Vec<String> = t
                .images()
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    q.set_negative(false);
                    q.to_string()
                })
                .collect();
            seen.insert(key);
        }
        assert_eq!(seen.len(), 720);
    }
}
