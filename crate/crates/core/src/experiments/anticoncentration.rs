use rayon::prelude::*;
use serde::Serialize;

use crate::oracle::{clifford_outcome_probability, OracleConfig};
use crate::rng::stream;
use crate::stabcore::{random_clifford, ProductState};
use crate::stats::{binomial_sigma, mean_and_stderr};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaRow {
    pub alpha: f64,
    /// Empirical `Pr(p_x >= alpha / 2^n)`.
    pub fraction: f64,
    /// `(1 - alpha)² / 2`.
    pub bound: f64,
    /// Binomial standard deviation of `fraction` at the bound.
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntiConcentrationReport {
    pub n: usize,
    pub trials: usize,
    pub outcome_index: usize,
    pub rows: Vec<AlphaRow>,
    pub mean: f64,
    pub mean_stderr: f64,
    /// `1 / 2^n`.
    pub mean_expected: f64,
    pub second_moment: f64,
    pub second_moment_stderr: f64,
    /// `(tr ρ² + 1) / (2^n (2^n + 1))`.
    pub second_moment_expected: f64,
    pub pass: bool,
}

pub fn anticoncentration_bound(alpha: f64) -> f64 {
    (1.0 - alpha).powi(2) / 2.0
}

/// `p_x = |⟨x|U|ψ⟩|²` for `trials` uniformly random Cliffords `U`; trial `i`
/// uses stream `i` of `seed`, so results do not depend on the thread count.
pub fn clifford_px_samples(
    state: &ProductState,
    trials: usize,
    outcome_index: usize,
    seed: u64,
    cfg: &OracleConfig,
) -> Result<Vec<f64>> {
    let n = state.num_qubits();
    if n > cfg.max_qubits {
        return Err(Error::OracleLimit {
            qubits: n,
            limit: cfg.max_qubits,
        });
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let u = random_clifford(n, &mut rng)?;
            clifford_outcome_probability(&u, state, outcome_index)
        })
        .collect()
}

/// Exceedance fractions and first two moments of `p_{0^n}` under uniformly
/// random Cliffords applied to a pure product `state`.
pub fn anticoncentration_report(
    state: &ProductState,
    trials: usize,
    alphas: &[f64],
    seed: u64,
    cfg: &OracleConfig,
) -> Result<AntiConcentrationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    if !state.is_pure() {
        return Err(Error::InvalidParameter("anti-concentration runs need a pure input".into()));
    }
    let n = state.num_qubits();
    let px = clifford_px_samples(state, trials, 0, seed, cfg)?;
    let dim = 2f64.powi(n as i32);
    let rows: Vec<AlphaRow> = alphas
        .iter()
        .map(|&alpha| {
            let hits = px.iter().filter(|&&p| p >= alpha / dim).count();
            let fraction = hits as f64 / trials as f64;
            let bound = anticoncentration_bound(alpha);
            let sigma = binomial_sigma(bound, trials as u64);
            AlphaRow {
                alpha,
                fraction,
                bound,
                sigma,
                pass: fraction > bound - 3.0 * sigma,
            }
        })
        .collect();
    let (mean, mean_stderr) = mean_and_stderr(&px);
    let squares: Vec<f64> = px.iter().map(|p| p * p).collect();
    let (second_moment, second_moment_stderr) = mean_and_stderr(&squares);
    let mean_expected = 1.0 / dim;
    let second_moment_expected = 2.0 / (dim * (dim + 1.0));
    let pass = rows.iter().all(|r| r.pass)
        && (mean - mean_expected).abs() <= 3.0 * mean_stderr
        && (second_moment - second_moment_expected).abs() <= 3.0 * second_moment_stderr;
    Ok(AntiConcentrationReport {
        n,
        trials,
        outcome_index: 0,
        rows,
        mean,
        mean_stderr,
        mean_expected,
        second_moment,
        second_moment_stderr,
        second_moment_expected,
        pass,
    })
}
