use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::oracle::{l1_distance, CategoricalSampler, ExactDistribution};
use crate::rng::stream;
use crate::stats::binomial_sigma;
use crate::{Error, Result};

/// Success probability of the optimal single-sample test between two
/// equally likely hypotheses: `1/2 + L1/4`.
pub fn optimal_single_round_pcorrect(d1: &ExactDistribution, d2: &ExactDistribution) -> Result<f64> {
    Ok(0.5 + l1_distance(d1, d2)? / 4.0)
}

/// Precision requested from Bob in round `j`: `24 δ / (π² j²)`. The series
/// sums to `4δ`.
pub fn bob_epsilon_schedule(j: u64, delta: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("rounds are numbered from 1".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    Ok(24.0 * delta / (PI * PI * (j as f64) * (j as f64)))
}

/// Partial sum of the schedule over rounds `1..=rounds`.
pub fn schedule_partial_sum(rounds: u64, delta: f64) -> Result<f64> {
    // smallest terms first for an accurate sum
    let mut total = 0.0;
    for j in (1..=rounds).rev() {
        total += bob_epsilon_schedule(j, delta)?;
    }
    Ok(total)
}

/// Moves `l1/2` of probability mass onto the lightest outcome (lowest index
/// on ties), taken from the heaviest outcomes first, so the result sits at
/// L1 distance exactly `l1` from `d` up to rounding.
pub fn perturb_distribution(d: &ExactDistribution, l1: f64) -> Result<ExactDistribution> {
    let mut probs = d.probs().to_vec();
    let target = probs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("non-empty outcome space");
    let mut remaining = l1 / 2.0;
    if !(l1 >= 0.0) || probs[target] + remaining > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!("cannot move mass {l1}/2 within this distribution")));
    }
    let mut order: Vec<usize> = (0..probs.len()).filter(|&i| i != target).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    probs[target] += remaining;
    for i in order {
        if remaining <= 0.0 {
            break;
        }
        let take = probs[i].min(remaining);
        probs[i] -= take;
        remaining -= take;
    }
    ExactDistribution::new(d.measured(), probs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BobMode {
    /// Bob samples Alice's distribution.
    Exact,
    /// Bob is a worst-case `ε_j`-simulator in round `j`.
    Scheduled,
    /// Bob's distribution is a fixed perturbation at the given L1 distance.
    Corrupted { l1: f64 },
}

impl BobMode {
    /// Bob's distribution in round `j` (1-based).
    pub fn round_distribution(&self, alice: &ExactDistribution, j: u64, delta: f64) -> Result<ExactDistribution> {
        match *self {
            BobMode::Exact => Ok(alice.clone()),
            BobMode::Scheduled => perturb_distribution(alice, bob_epsilon_schedule(j, delta)?),
            BobMode::Corrupted { l1 } => perturb_distribution(alice, l1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisTestResult {
    pub bob: BobMode,
    pub trials: u64,
    pub rounds: u64,
    pub delta: f64,
    pub p_correct: f64,
    pub sigma: f64,
    /// Optimal success probability, when the transcript space is small enough to enumerate.
    pub analytic: Option<f64>,
    /// L1 distance between Alice and Bob in each round.
    pub round_l1: Vec<f64>,
    pub samples_per_round: u64,
}

/// Largest transcript space enumerated for the analytic optimum.
const MAX_TRANSCRIPT_BITS: usize = 20;

/// L1 distance between the product distributions of two round sequences,
/// by explicit enumeration of transcripts.
pub fn transcript_l1(alice: &[ExactDistribution], bob: &[ExactDistribution]) -> Result<f64> {
    if alice.len() != bob.len() {
        return Err(Error::DimensionMismatch {
            expected: alice.len(),
            found: bob.len(),
        });
    }
    let bits: usize = alice.iter().map(|d| d.measured()).sum();
    if bits > MAX_TRANSCRIPT_BITS {
        return Err(Error::InvalidParameter(format!("{bits}-bit transcripts are too many to enumerate")));
    }
    let mut pa = vec![1.0];
    let mut pb = vec![1.0];
    for (a, b) in alice.iter().zip(bob) {
        l1_distance(a, b)?;
        pa = pa.iter().flat_map(|x| a.probs().iter().map(move |y| x * y)).collect();
        pb = pb.iter().flat_map(|x| b.probs().iter().map(move |y| x * y)).collect();
    }
    Ok(pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).sum())
}

/// Repeats the referee's game `trials` times.
///
/// Each trial flips a fair coin to pick Alice or Bob, collects one sample per
/// round from the chosen party, and decides by the likelihood ratio of the
/// transcript under the two known candidate distributions (ties broken by a
/// fair coin). Trial `i` uses stream `i` of `seed`.
pub fn run_hypothesis_test(
    alice: &ExactDistribution,
    bob: BobMode,
    delta: f64,
    trials: u64,
    rounds: u64,
    seed: u64,
) -> Result<HypothesisTestResult> {
    if trials == 0 || rounds == 0 {
        return Err(Error::InvalidParameter("trials and rounds must be positive".into()));
    }
    let bob_rounds: Vec<ExactDistribution> = (1..=rounds)
        .map(|j| bob.round_distribution(alice, j, delta))
        .collect::<Result<_>>()?;
    let round_l1: Vec<f64> = bob_rounds
        .iter()
        .map(|b| l1_distance(alice, b))
        .collect::<Result<_>>()?;
    let alice_sampler = alice.sampler();
    let bob_samplers: Vec<CategoricalSampler> = bob_rounds.iter().map(|b| b.sampler()).collect();
    let correct: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let truth_is_bob = rng.gen::<bool>();
            let (mut like_a, mut like_b) = (1.0f64, 1.0f64);
            for j in 0..rounds as usize {
                let x = if truth_is_bob {
                    bob_samplers[j].sample_index(&mut rng)
                } else {
                    alice_sampler.sample_index(&mut rng)
                };
                like_a *= alice.probs()[x];
                like_b *= bob_rounds[j].probs()[x];
            }
            let says_bob = if like_b > like_a {
                true
            } else if like_a > like_b {
                false
            } else {
                rng.gen::<bool>()
            };
            (says_bob == truth_is_bob) as u64
        })
        .sum();
    let p_correct = correct as f64 / trials as f64;
    let alices = vec![alice.clone(); rounds as usize];
    let analytic = transcript_l1(&alices, &bob_rounds).ok().map(|l1| 0.5 + l1 / 4.0);
    Ok(HypothesisTestResult {
        bob,
        trials,
        rounds,
        delta,
        p_correct,
        sigma: binomial_sigma(0.5, trials),
        analytic,
        round_l1,
        samples_per_round: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimum_examples() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(optimal_single_round_pcorrect(&d, &d).unwrap(), 0.5);
        let a = ExactDistribution::point_mass("0".parse().unwrap());
        let b = ExactDistribution::point_mass("1".parse().unwrap());
        assert_eq!(optimal_single_round_pcorrect(&a, &b).unwrap(), 1.0);
        let u = ExactDistribution::uniform(2);
        assert!((optimal_single_round_pcorrect(&d, &u).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn schedule_examples() {
        assert!((bob_epsilon_schedule(1, 0.1).unwrap() - 0.243_171_2).abs() < 1e-6);
        assert!(bob_epsilon_schedule(0, 0.1).is_err());
        assert!(bob_epsilon_schedule(2, 0.1).unwrap() < bob_epsilon_schedule(1, 0.1).unwrap());
        assert!(schedule_partial_sum(1_000_000, 0.05).unwrap() <= 4.0 * 0.05);
    }

    #[test]
    fn perturbation_hits_requested_distance() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let p = perturb_distribution(&d, 0.4).unwrap();
        assert!((l1_distance(&d, &p).unwrap() - 0.4).abs() < 1e-12);
        let pm = ExactDistribution::point_mass("00".parse().unwrap());
        let p = perturb_distribution(&pm, 0.3).unwrap();
        assert!((l1_distance(&pm, &p).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn two_round_transcripts_telescope() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let delta = 0.05;
        let bobs: Vec<_> = (1..=2).map(|j| BobMode::Scheduled.round_distribution(&d, j, delta).unwrap()).collect();
        let l1 = transcript_l1(&[d.clone(), d.clone()], &bobs).unwrap();
        let budget = schedule_partial_sum(2, delta).unwrap();
        assert!(l1 <= budget + 1e-12, "{l1} > {budget}");
    }

    #[test]
    fn referee_is_deterministic() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = run_hypothesis_test(&d, BobMode::Corrupted { l1: 0.4 }, 0.05, 2000, 1, 9).unwrap();
        let b = run_hypothesis_test(&d, BobMode::Corrupted { l1: 0.4 }, 0.05, 2000, 1, 9).unwrap();
        assert_eq!(a, b);
        assert!((a.analytic.unwrap() - 0.6).abs() < 1e-12);
    }
}
