use super::{check_eps_delta, hoeffding_samples, Estimate, PolyBox};
use crate::circuits::{Outcome, OutcomePattern};
use crate::oracle::{CategoricalSampler, ExactDistribution};
use crate::rng::StreamRng;
use crate::Result;

/// A sampler that, asked for accuracy `eps`, draws from some distribution
/// within L1 distance `eps` of the target.
pub trait EpsilonSampler: Send + Sync {
    fn measured(&self) -> usize;

    fn sample(&self, eps: f64, rng: &mut StreamRng) -> Result<Outcome>;
}

/// Exact sampling from a known distribution (accuracy is ignored).
#[derive(Clone, Debug)]
pub struct ExactSampler {
    k: usize,
    sampler: CategoricalSampler,
}

impl ExactSampler {
    pub fn new(dist: &ExactDistribution) -> Self {
        ExactSampler {
            k: dist.measured(),
            sampler: dist.sampler(),
        }
    }
}

impl EpsilonSampler for ExactSampler {
    fn measured(&self) -> usize {
        self.k
    }

    fn sample(&self, _eps: f64, rng: &mut StreamRng) -> Result<Outcome> {
        Ok(self.sampler.sample(rng))
    }
}

/// Fraction of `hoeffding_samples(eps/2, delta, 1)` draws, taken at sampler
/// accuracy `eps/2`, that land in `pattern`.
pub fn frequency_polybox<S: EpsilonSampler + ?Sized>(
    sampler: &S,
    pattern: &OutcomePattern,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<Estimate> {
    check_eps_delta(eps, delta)?;
    pattern.check_len(sampler.measured())?;
    let s = hoeffding_samples(eps / 2.0, delta, 1.0)?;
    let mut hits = 0u64;
    for _ in 0..s {
        if pattern.matches(&sampler.sample(eps / 2.0, rng)?) {
            hits += 1;
        }
    }
    Ok(Estimate {
        value: hits as f64 / s as f64,
        eps,
        delta,
        samples_used: s,
    })
}

/// [`frequency_polybox`] behind the [`PolyBox`] interface.
pub struct FrequencyPolyBox<S> {
    sampler: S,
}

impl<S: EpsilonSampler> FrequencyPolyBox<S> {
    pub fn new(sampler: S) -> Self {
        FrequencyPolyBox { sampler }
    }
}

impl<S: EpsilonSampler> PolyBox for FrequencyPolyBox<S> {
    fn measured(&self) -> usize {
        self.sampler.measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        frequency_polybox(&self.sampler, pattern, eps, delta, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn point_mass_and_certain_event() {
        let o: Outcome = "101".parse().unwrap();
        let s = ExactSampler::new(&ExactDistribution::point_mass(o));
        let mut rng = stream(4, 0);
        let e = frequency_polybox(&s, &"101".parse().unwrap(), 0.1, 0.05, &mut rng).unwrap();
        assert_eq!(e.value, 1.0);
        let u = ExactSampler::new(&ExactDistribution::uniform(3));
        let e = frequency_polybox(&u, &"***".parse().unwrap(), 0.1, 0.05, &mut rng).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn ghz_marginal() {
        let d = ExactDistribution::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let b = FrequencyPolyBox::new(ExactSampler::new(&d));
        let e = b.estimate(&"0*".parse().unwrap(), 0.05, 0.01, &mut stream(8, 0)).unwrap();
        assert!((e.value - 0.5).abs() < 0.05);
        assert_eq!(e.samples_used, hoeffding_samples(0.025, 0.01, 1.0).unwrap());
    }
}
