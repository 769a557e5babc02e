//! Brute-force ground truth: dense statevector simulation of every circuit
//! family, exact outcome distributions, and distribution utilities.

mod dense;
mod distribution;
mod statevector;

pub use dense::{gate_matrix, matrix_to_pauli, pauli_matrix, DenseMatrix};
pub use distribution::{
    exact_sample, l1_distance, min_sparsity, CategoricalSampler, ExactDistribution, NORMALIZATION_TOLERANCE,
};
pub use statevector::{clifford_output_state, StateVector};

use crate::circuits::{Circuit, EncodedCircuit, IqpCircuit, OutcomePattern, ProdCircuit, Trit};
use crate::stabcore::{CliffordTableau, ProductState};
use crate::{Error, Result};

pub const DEFAULT_ORACLE_LIMIT: usize = 20;
pub const ORACLE_LIMIT_ENV: &str = "BORNBOX_ORACLE_LIMIT";

/// Oracle size cap, in statevector qubits (including purification ancillas).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_qubits: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_qubits: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl OracleConfig {
    /// Default limit, overridden by `BORNBOX_ORACLE_LIMIT` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ORACLE_LIMIT_ENV) {
            Ok(v) => {
                let max_qubits = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("{ORACLE_LIMIT_ENV}={v} is not an integer")))?;
                Ok(OracleConfig { max_qubits })
            }
            Err(_) => Ok(OracleConfig::default()),
        }
    }

    fn check(&self, qubits: usize) -> Result<()> {
        if qubits > self.max_qubits {
            return Err(Error::OracleLimit {
                qubits,
                limit: self.max_qubits,
            });
        }
        Ok(())
    }
}

fn mixed_count(state: &ProductState) -> usize {
    state
        .bloch_vectors()
        .iter()
        .filter(|r| (r.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() >= 1e-12)
        .count()
}

/// Final state of a product-input Clifford circuit (purified when the input is mixed).
pub fn prod_statevector(c: &ProdCircuit, cfg: &OracleConfig) -> Result<StateVector> {
    cfg.check(c.num_qubits() + mixed_count(c.prep()))?;
    let mut sv = StateVector::purified_product(c.prep());
    for g in c.gates() {
        sv.apply_gate(g)?;
    }
    Ok(sv)
}

pub fn iqp_statevector(c: &IqpCircuit, cfg: &OracleConfig) -> Result<StateVector> {
    cfg.check(c.num_qubits())?;
    let mut sv = StateVector::zeros(c.num_qubits());
    for &row in c.program().rows() {
        sv.apply_x_rotation(row, std::f64::consts::FRAC_PI_4);
    }
    Ok(sv)
}

/// `Pr(X = 1)` for the first measured bit of `c`.
/// `Pr(X = 1)` for the inner circuit's first bit; every encoded probability
/// is a fixed function of this one number.
pub fn encoded_first_bit(e: &EncodedCircuit, cfg: &OracleConfig) -> Result<f64> {
    first_bit_one(e.inner(), cfg)
}

fn first_bit_one(c: &Circuit, cfg: &OracleConfig) -> Result<f64> {
    let mut pattern = OutcomePattern::all_wild(c.measured());
    pattern.set(0, Trit::One);
    // rounding can leave this a hair outside [0, 1]
    Ok(exact_probability(c, &pattern, cfg)?.clamp(0.0, 1.0))
}

/// Full outcome distribution over the measured bits.
pub fn exact_distribution(c: &Circuit, cfg: &OracleConfig) -> Result<ExactDistribution> {
    match c {
        Circuit::Prod(p) => {
            let sv = prod_statevector(p, cfg)?;
            let probs = sv.leading_probabilities(p.measured());
            ExactDistribution::new(p.measured(), probs)
        }
        Circuit::Iqp(q) => {
            let sv = iqp_statevector(q, cfg)?;
            ExactDistribution::new(q.measured(), sv.leading_probabilities(q.measured()))
        }
        Circuit::Encoded(e) => encoded_distribution(e, cfg),
    }
}

fn encoded_distribution(e: &EncodedCircuit, cfg: &OracleConfig) -> Result<ExactDistribution> {
    let n = e.tail_len();
    cfg.check(n + 1)?;
    let p1 = first_bit_one(e.inner(), cfg)?;
    let scale = 1.0 / (1u64 << n) as f64;
    let probs = (0..1u64 << (n + 1))
        .map(|z| {
            let head = (z >> n) & 1;
            let parity = (z & ((1 << n) - 1)).count_ones() as u64 & 1;
            let x = head ^ parity;
            scale * if x == 1 { p1 } else { 1.0 - p1 }
        })
        .collect();
    ExactDistribution::new(n + 1, probs)
}

/// Exact Born probability of the event `pattern`.
pub fn exact_probability(c: &Circuit, pattern: &OutcomePattern, cfg: &OracleConfig) -> Result<f64> {
    c.check_pattern(pattern)?;
    match c {
        Circuit::Encoded(e) => encoded_probability_from(e, pattern, encoded_first_bit(e, cfg)?),
        _ => exact_distribution(c, cfg)?.marginal(pattern),
    }
}

/// `Pr(Z ∈ S)` for `Z = (X ⊕ Par(Y), Y)` without materialising `2^{n+1}`
/// outcomes: count tail completions by parity, then weight by `Pr(X)`.
/// `p1` is the value of [`encoded_first_bit`].
pub fn encoded_probability_from(e: &EncodedCircuit, pattern: &OutcomePattern, p1: f64) -> Result<f64> {
    pattern.check_len(e.measured())?;
    let n = e.tail_len();
    let tail = &pattern.trits()[1..];
    let wild = tail.iter().filter(|&&t| t == Trit::Wild).count();
    let fixed_parity = tail.iter().filter(|&&t| t == Trit::One).count() & 1;
    // number of tail strings matching the pattern with parity 0 and 1
    let mut by_parity = [0.0f64; 2];
    if wild == 0 {
        by_parity[fixed_parity] = 1.0;
    } else {
        let half = 2f64.powi(wild as i32 - 1);
        by_parity = [half, half];
    }
    let heads: &[u8] = match pattern.get(0) {
        Trit::Zero => &[0],
        Trit::One => &[1],
        Trit::Wild => &[0, 1],
    };
    // weight carried by X = 0 and by X = 1
    let mut weight = [0.0f64; 2];
    for &z0 in heads {
        for (parity, &count) in by_parity.iter().enumerate() {
            weight[z0 as usize ^ parity] += count;
        }
    }
    let scale = 2f64.powi(-(n as i32));
    // equal weights cancel `Pr(X)` exactly; keep that exact in floating point
    let total = if weight[0] == weight[1] {
        scale * weight[0]
    } else {
        scale * (weight[0] * (1.0 - p1) + weight[1] * p1)
    };
    Ok(total)
}

/// `p_x = |⟨x|U|ψ⟩|²` for a tableau-specified Clifford on a pure product input.
pub fn clifford_outcome_probability(t: &CliffordTableau, input: &ProductState, outcome_index: usize) -> Result<f64> {
    let sv = clifford_output_state(t, input)?;
    sv.amplitudes()
        .get(outcome_index)
        .map(|a| a.norm_sqr())
        .ok_or_else(|| Error::InvalidParameter(format!("outcome {outcome_index} out of range")))
}
