//! Empirical harnesses: anti-concentration of random Clifford outputs,
//! sparsity profiles, and the distinguishability game between an exact
//! sampler and an approximate one.

mod anticoncentration;
mod hypothesis;
mod selftest;

use serde::Serialize;

pub use anticoncentration::{
    anticoncentration_bound, anticoncentration_report, clifford_px_samples, AlphaRow, AntiConcentrationReport,
};
pub use hypothesis::{
    bob_epsilon_schedule, optimal_single_round_pcorrect, perturb_distribution, run_hypothesis_test,
    schedule_partial_sum, transcript_l1, BobMode, HypothesisTestResult,
};
pub use selftest::{selftest, SelftestCheck, SelftestOptions, SelftestReport};

use crate::circuits::Circuit;
use crate::oracle::{exact_distribution, min_sparsity, OracleConfig};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SparsityPoint {
    pub eps: f64,
    pub t: usize,
}

/// Minimal approximate sparsity of the circuit's distribution at each `eps`.
pub fn sparsity_profile(c: &Circuit, eps_grid: &[f64], cfg: &OracleConfig) -> Result<Vec<SparsityPoint>> {
    let d = exact_distribution(c, cfg)?;
    Ok(eps_grid
        .iter()
        .map(|&eps| SparsityPoint {
            eps,
            t: min_sparsity(&d, eps),
        })
        .collect())
}

/// One reported quantity with its reference bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

impl Metric {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            bound: None,
            pass: None,
        }
    }

    pub fn checked(name: impl Into<String>, value: f64, bound: f64, pass: bool) -> Self {
        Metric {
            name: name.into(),
            value,
            bound: Some(bound),
            pass: Some(pass),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::parse_circuit;

    #[test]
    fn profiles() {
        let pm = parse_circuit("family prod\nqubits 3\nmeasure 3\ngate X 1\n").unwrap();
        let grid = [0.0, 0.1, 0.5, 1.0, 1.9];
        let cfg = OracleConfig::default();
        assert!(sparsity_profile(&pm, &grid, &cfg).unwrap().iter().all(|p| p.t == 1));
        // uniform over a 2^2-element affine subspace of 3 bits
        let flat = parse_circuit("family prod\nqubits 3\nmeasure 3\ngate H 0\ngate H 1\ngate CNOT 0 2\ngate X 2\n").unwrap();
        for p in sparsity_profile(&flat, &grid, &cfg).unwrap() {
            assert_eq!(p.t, (4.0 * (1.0 - p.eps / 2.0)).ceil() as usize, "eps {}", p.eps);
        }
    }
}
