use rand::Rng;

use crate::circuits::{Outcome, OutcomePattern};
use crate::{Error, Result};

pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Outcome distribution over `k` measured bits, stored densely by outcome index.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    k: usize,
    probs: Vec<f64>,
}

impl ExactDistribution {
    pub fn new(k: usize, probs: Vec<f64>) -> Result<Self> {
        if k >= usize::BITS as usize || probs.len() != 1usize << k {
            return Err(Error::DimensionMismatch {
                expected: 1usize.checked_shl(k as u32).unwrap_or(0),
                found: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative or NaN probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        Ok(ExactDistribution { k, probs })
    }

    /// Builds from `(outcome, probability)` pairs; unlisted outcomes get 0.
    pub fn from_sparse(k: usize, entries: &[(Outcome, f64)]) -> Result<Self> {
        let mut probs = vec![0.0; 1 << k];
        for (o, p) in entries {
            if o.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: o.len() });
            }
            probs[o.index() as usize] += p;
        }
        Self::new(k, probs)
    }

    pub fn point_mass(outcome: Outcome) -> Self {
        let mut probs = vec![0.0; 1 << outcome.len()];
        probs[outcome.index() as usize] = 1.0;
        ExactDistribution { k: outcome.len(), probs }
    }

    pub fn uniform(k: usize) -> Self {
        let n = 1usize << k;
        ExactDistribution {
            k,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn measured(&self) -> usize {
        self.k
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: Outcome) -> f64 {
        self.probs[outcome.index() as usize]
    }

    /// Probability of the event `pattern` (wildcards summed out).
    pub fn marginal(&self, pattern: &OutcomePattern) -> Result<f64> {
        pattern.check_len(self.k)?;
        let (mask, value) = pattern.mask_value();
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as u64) & mask == value)
            .map(|(_, p)| p)
            .sum())
    }

    pub fn support(&self) -> impl Iterator<Item = (Outcome, f64)> + '_ {
        let k = self.k;
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(move |(i, &p)| (Outcome::new(i as u64, k).expect("index in range"), p))
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn sampler(&self) -> CategoricalSampler {
        CategoricalSampler::new(self.k, &self.probs)
    }
}

/// Sum of absolute differences over a common outcome space.
pub fn l1_distance(d1: &ExactDistribution, d2: &ExactDistribution) -> Result<f64> {
    if d1.k != d2.k {
        return Err(Error::DimensionMismatch {
            expected: d1.k,
            found: d2.k,
        });
    }
    Ok(d1.probs.iter().zip(&d2.probs).map(|(a, b)| (a - b).abs()).sum())
}

/// Smallest `t` such that `d` is within L1 distance `eps` of a normalised
/// `t`-sparse distribution. The nearest such distribution keeps the `t`
/// heaviest outcomes and sits at distance twice the discarded mass.
pub fn min_sparsity(d: &ExactDistribution, eps: f64) -> usize {
    let mut sorted = d.probs.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    // `tail[j]` is the mass of the j lightest outcomes
    let mut tail = 0.0;
    let mut dropped = 0;
    for &p in &sorted {
        if 2.0 * (tail + p) <= eps + 1e-12 {
            tail += p;
            dropped += 1;
        } else {
            break;
        }
    }
    (sorted.len() - dropped).max(1)
}

/// Draws a categorical sample from `d`.
pub fn exact_sample<R: Rng + ?Sized>(d: &ExactDistribution, rng: &mut R) -> Outcome {
    d.sampler().sample(rng)
}

/// Inverse-CDF sampler over a fixed probability vector.
#[derive(Clone, Debug)]
pub struct CategoricalSampler {
    k: usize,
    cdf: Vec<f64>,
    last_nonzero: usize,
}

impl CategoricalSampler {
    /// `weights` need not be normalised but must be non-negative with positive sum.
    pub fn new(k: usize, weights: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        let last_nonzero = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        CategoricalSampler { k, cdf, last_nonzero }
    }

    /// Index into the weight vector.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("non-empty support");
        let u = rng.gen::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.last_nonzero)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        Outcome::new(self.sample_index(rng) as u64, self.k).expect("index in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn l1_examples() {
        let a = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let u = ExactDistribution::uniform(2);
        assert!((l1_distance(&a, &u).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
        let p0 = ExactDistribution::point_mass(Outcome::new(0, 1).unwrap());
        let p1 = ExactDistribution::point_mass(Outcome::new(1, 1).unwrap());
        assert_eq!(l1_distance(&p0, &p1).unwrap(), 2.0);
        assert!(l1_distance(&p0, &a).is_err());
    }

    #[test]
    fn sparsity_examples() {
        let pm = ExactDistribution::point_mass(Outcome::new(3, 3).unwrap());
        assert_eq!(min_sparsity(&pm, 0.0), 1);
        assert_eq!(min_sparsity(&pm, 1.5), 1);
        assert_eq!(min_sparsity(&ExactDistribution::uniform(2), 0.0), 4);
        let d = ExactDistribution::new(2, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        assert_eq!(min_sparsity(&d, 0.2), 3);
        assert_eq!(min_sparsity(&d, 0.19), 4);
    }

    #[test]
    fn validation() {
        assert!(ExactDistribution::new(1, vec![0.5, 0.6]).is_err());
        assert!(ExactDistribution::new(1, vec![1.5, -0.5]).is_err());
        assert!(ExactDistribution::new(2, vec![1.0]).is_err());
    }

    #[test]
    fn point_mass_sampling_and_determinism() {
        let o = Outcome::new(2, 2).unwrap();
        let d = ExactDistribution::point_mass(o);
        let mut rng = stream(1, 0);
        assert!((0..100).all(|_| exact_sample(&d, &mut rng) == o));
        let u = ExactDistribution::uniform(3);
        let run = || {
            let mut r = stream(9, 0);
            (0..50).map(|_| exact_sample(&u, &mut r)).collect::<Vec<_>>()
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
    }

    #[test]
    fn marginals() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((d.marginal(&"1*".parse().unwrap()).unwrap() - 0.7).abs() < 1e-15);
        assert!((d.marginal(&"*1".parse().unwrap()).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(d.marginal(&"**".parse().unwrap()).unwrap(), 1.0);
        assert!(d.marginal(&"*".parse().unwrap()).is_err());
    }
}
