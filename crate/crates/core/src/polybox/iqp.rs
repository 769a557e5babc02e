use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;
use std::sync::Mutex;

use num_complex::Complex64;
use rand::Rng;

use super::{check_eps_delta, hoeffding_samples, mean_of, Estimate, PolyBox};
use crate::circuits::{BinaryMatrix, IqpCircuit, OutcomePattern, Trit};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Largest column count accepted by the explicit codeword enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

/// `2^{-n} Σ_{v ∈ {0,1}^n} exp(-2iθ · wt(P v))` by direct enumeration of the
/// code generated by the columns of `P`.
pub fn alpha_weight_enumerator(p: &BinaryMatrix, theta: f64) -> Result<Complex64> {
    let n = p.num_cols();
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            columns: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    // the codeword weight only takes values 0..=m, so tally weights first
    let m = p.num_rows();
    let mut tally = vec![0u64; m + 1];
    for v in 0..1u64 << n {
        let wt = p.rows().iter().filter(|&&row| (row & v).count_ones() & 1 == 1).count();
        tally[wt] += 1;
    }
    let sum: Complex64 = tally
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| Complex64::from_polar(c as f64, -2.0 * theta * w as f64))
        .sum();
    Ok(sum / (1u64 << n) as f64)
}

/// Rows of `P` with odd overlap with `r`: exactly the terms of the X-program
/// that anticommute with `Z^r`.
pub fn affinify(p: &BinaryMatrix, r: u64) -> BinaryMatrix {
    let rows = p
        .rows()
        .iter()
        .copied()
        .filter(|row| (row & r).count_ones() & 1 == 1)
        .collect();
    BinaryMatrix::new(p.num_cols(), rows).expect("rows of a valid matrix")
}

/// `⟨Z^r⟩` after the X-program `exp(iθ Σ_i X^{P_i})` on `|0^n⟩`.
///
/// Only the anticommuting rows `P_r` survive conjugation, giving
/// `⟨0| exp(-2iθ Σ_{i∈r} X^{P_i}) |0⟩ = e^{-2iθ m_r} α(P_r, -2θ)` with `m_r`
/// the row count of `P_r`.
pub fn iqp_correlator(p: &BinaryMatrix, r: u64, theta: f64) -> Result<Complex64> {
    let pr = affinify(p, r);
    let alpha = alpha_weight_enumerator(&pr, -2.0 * theta)?;
    Ok(Complex64::from_polar(1.0, -2.0 * theta * pr.num_rows() as f64) * alpha)
}

/// Estimator for X-programs at angle π/4.
///
/// `P(S) = E_r[(-1)^{r·s} ⟨Z^r⟩]` for `r` uniform over the span of the
/// fixed positions of `S` and `s` the fixed bits; each draw is the real part
/// of one such term, in `[-1, 1]`.
#[derive(Debug)]
pub struct IqpPolyBox {
    circuit: IqpCircuit,
    // deterministic correlator values, keyed by r
    cache: Mutex<HashMap<u64, f64>>,
}

impl IqpPolyBox {
    pub fn new(circuit: IqpCircuit) -> Result<Self> {
        if circuit.num_qubits() > ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit {
                columns: circuit.num_qubits(),
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(IqpPolyBox {
            circuit,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn circuit(&self) -> &IqpCircuit {
        &self.circuit
    }

    fn correlator(&self, r: u64) -> Result<f64> {
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&r) {
            return Ok(v);
        }
        let v = iqp_correlator(self.circuit.program(), r, FRAC_PI_4)?.re;
        self.cache.lock().expect("cache lock").insert(r, v);
        Ok(v)
    }

    /// One unbiased draw `Re[(-1)^{r·s} ⟨Z^r⟩]`.
    pub fn single_sample(&self, pattern: &OutcomePattern, rng: &mut StreamRng) -> Result<f64> {
        pattern.check_len(self.circuit.measured())?;
        let (fixed, ones) = fixed_masks(pattern);
        self.draw(fixed, ones, rng)
    }

    fn draw(&self, fixed: u64, ones: u64, rng: &mut StreamRng) -> Result<f64> {
        // uniform subset of the fixed positions
        let r = rng.gen::<u64>() & fixed;
        let sign = if (r & ones).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
        Ok(sign * self.correlator(r)?)
    }
}

/// Bitmasks over qubits (bit `q` is qubit `q`) of the fixed positions and of
/// the positions fixed to 1.
fn fixed_masks(pattern: &OutcomePattern) -> (u64, u64) {
    let mut fixed = 0u64;
    let mut ones = 0u64;
    for (q, t) in pattern.trits().iter().enumerate() {
        match t {
            Trit::Wild => {}
            Trit::Zero => fixed |= 1 << q,
            Trit::One => {
                fixed |= 1 << q;
                ones |= 1 << q;
            }
        }
    }
    (fixed, ones)
}

impl PolyBox for IqpPolyBox {
    fn measured(&self) -> usize {
        self.circuit.measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        check_eps_delta(eps, delta)?;
        pattern.check_len(self.circuit.measured())?;
        let (fixed, ones) = fixed_masks(pattern);
        let s = hoeffding_samples(eps, delta, 2.0)?;
        let value = mean_of(s, || self.draw(fixed, ones, rng))?;
        Ok(Estimate {
            value,
            eps,
            delta,
            samples_used: s,
        })
    }
}

pub fn iqp_single_sample(c: &IqpCircuit, pattern: &OutcomePattern, rng: &mut StreamRng) -> Result<f64> {
    IqpPolyBox::new(c.clone())?.single_sample(pattern, rng)
}

pub fn iqp_estimate(
    c: &IqpCircuit,
    pattern: &OutcomePattern,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<Estimate> {
    IqpPolyBox::new(c.clone())?.estimate(pattern, eps, delta, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::Circuit;
    use crate::oracle::{exact_distribution, OracleConfig};
    use crate::rng::stream;

    #[test]
    fn enumerator_examples() {
        let zero = BinaryMatrix::zeros(3, 4).unwrap();
        assert!((alpha_weight_enumerator(&zero, 0.7).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let one = BinaryMatrix::from_rows(&[vec![1]]).unwrap();
        let a = alpha_weight_enumerator(&one, FRAC_PI_4).unwrap();
        assert!((a - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        let wide = BinaryMatrix::zeros(1, 25).unwrap();
        assert!(alpha_weight_enumerator(&wide, 0.1).is_err());
    }

    #[test]
    fn enumerator_matches_reverse_order_recount() {
        let p = BinaryMatrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 1, 1, 1]]).unwrap();
        let theta = 0.37;
        let mut direct = Complex64::new(0.0, 0.0);
        for v in (0..16u64).rev() {
            let mut wt = 0;
            for i in 0..3 {
                let mut bit = 0;
                for j in 0..4 {
                    bit ^= (p.get(i, j) as u64) & ((v >> j) & 1);
                }
                wt += bit;
            }
            direct += Complex64::from_polar(1.0, -2.0 * theta * wt as f64);
        }
        direct /= 16.0;
        assert!((alpha_weight_enumerator(&p, theta).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn empty_program_is_identity() {
        let c = IqpCircuit::new(BinaryMatrix::zeros(0, 3).unwrap(), 3).unwrap();
        let e = iqp_estimate(&c, &"000".parse().unwrap(), 0.05, 0.01, &mut stream(1, 0)).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn correlators_match_oracle_expectations() {
        // compare E_r[(-1)^{r·s}⟨Z^r⟩] over the full span with dense marginals
        let p = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0], vec![1, 1, 1]]).unwrap();
        let c = IqpCircuit::new(p.clone(), 3).unwrap();
        let d = exact_distribution(&Circuit::Iqp(c.clone()), &OracleConfig::default()).unwrap();
        for s in ["000", "101", "1*0", "**1", "0*1"] {
            let pattern: OutcomePattern = s.parse().unwrap();
            let (fixed, ones) = fixed_masks(&pattern);
            let mut total = 0.0;
            let mut count = 0;
            for r in 0..8u64 {
                if r & !fixed != 0 {
                    continue;
                }
                let sign = if (r & ones).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
                total += sign * iqp_correlator(&p, r, FRAC_PI_4).unwrap().re;
                count += 1;
            }
            let exact = d.marginal(&pattern).unwrap();
            assert!((total / count as f64 - exact).abs() < 1e-12, "{s}");
        }
    }
}
