//! Small statistical helpers used by the experiment harnesses and tests.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::circuits::Outcome;
use crate::oracle::ExactDistribution;
use crate::{Error, Result};

/// Standard deviation of an empirical frequency of `n` Bernoulli(`p`) trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Histogram of outcomes over `2^k` cells.
pub fn outcome_counts(k: usize, samples: &[Outcome]) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << k];
    for s in samples {
        counts[s.index() as usize] += 1;
    }
    counts
}

/// L1 distance between the empirical distribution of `counts` and `d`.
pub fn empirical_l1(counts: &[u64], d: &ExactDistribution) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(d.probs())
        .map(|(&c, &p)| (c as f64 / total as f64 - p).abs())
        .sum()
}

const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Draws landing on outcomes of zero probability (an immediate failure).
    pub impossible: u64,
}

impl ChiSquareResult {
    pub fn passes(&self, level: f64) -> bool {
        self.impossible == 0 && self.p_value >= level
    }
}

/// Pearson goodness-of-fit of `counts` against `probs`. Cells with zero
/// probability are excluded from the statistic and reported separately;
/// cells expecting fewer than five draws are pooled into one.
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if counts.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: probs.len(),
            found: counts.len(),
        });
    }
    let total: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible = 0;
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        if p <= 0.0 {
            impossible += c;
            continue;
        }
        let expected = p * total as f64;
        if expected < MIN_EXPECTED {
            pool_obs += c as f64;
            pool_exp += expected;
            continue;
        }
        statistic += (c as f64 - expected).powi(2) / expected;
        cells += 1;
    }
    if pool_exp > 0.0 {
        statistic += (pool_obs - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let chi = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        chi.sf(statistic)
    };
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value,
        impossible,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
    pub p_value: f64,
}

impl KsResult {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// `c(α)` for the asymptotic two-sample Kolmogorov-Smirnov test.
fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Asymptotic Kolmogorov survival function `Q(λ) = 2 Σ (-1)^{j-1} e^{-2 j² λ²}`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS test at significance `alpha`.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> KsResult {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let scale = ((n * m) as f64 / (n + m) as f64).sqrt();
    KsResult {
        statistic: d,
        critical: ks_coefficient(alpha) / scale,
        p_value: kolmogorov_sf(d * scale),
    }
}
