use rand::Rng;

use super::{Estimate, PolyBox};
use crate::circuits::{Circuit, OutcomePattern};
use crate::oracle::{exact_distribution, ExactDistribution, OracleConfig};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Returns exact marginals of a known distribution, ignoring `eps` and `delta`.
#[derive(Clone, Debug)]
pub struct ExactPolyBox {
    dist: ExactDistribution,
}

impl ExactPolyBox {
    pub fn new(dist: ExactDistribution) -> Self {
        ExactPolyBox { dist }
    }

    pub fn from_circuit(c: &Circuit, cfg: &OracleConfig) -> Result<Self> {
        Ok(Self::new(exact_distribution(c, cfg)?))
    }

    pub fn distribution(&self) -> &ExactDistribution {
        &self.dist
    }
}

impl PolyBox for ExactPolyBox {
    fn measured(&self) -> usize {
        self.dist.measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, _delta: f64, _rng: &mut StreamRng) -> Result<Estimate> {
        Ok(Estimate {
            value: self.dist.marginal(pattern)?,
            eps: eps.max(0.0),
            delta: 0.0,
            samples_used: 1,
        })
    }
}

/// Exact marginal plus noise that honours the additive contract: with
/// probability `delta / 2` the answer is off by a full unit, otherwise the
/// error is uniform on `(-eps, eps)`.
#[derive(Clone, Debug)]
pub struct BoundedNoisePolyBox {
    dist: ExactDistribution,
}

impl BoundedNoisePolyBox {
    pub fn new(dist: ExactDistribution) -> Self {
        BoundedNoisePolyBox { dist }
    }

    pub fn from_circuit(c: &Circuit, cfg: &OracleConfig) -> Result<Self> {
        Ok(Self::new(exact_distribution(c, cfg)?))
    }
}

impl PolyBox for BoundedNoisePolyBox {
    fn measured(&self) -> usize {
        self.dist.measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        if !(eps > 0.0) || !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("bad precision eps={eps} delta={delta}")));
        }
        let p = self.dist.marginal(pattern)?;
        let value = if rng.gen::<f64>() < delta / 2.0 {
            if p < 0.5 {
                p + 1.0
            } else {
                p - 1.0
            }
        } else {
            p + eps * (2.0 * rng.gen::<f64>() - 1.0)
        };
        Ok(Estimate {
            value,
            eps,
            delta,
            samples_used: 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn noise_stays_in_band() {
        let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let b = BoundedNoisePolyBox::new(d);
        let mut rng = stream(2, 0);
        let p: OutcomePattern = "1*".parse().unwrap();
        let bad = (0..10_000)
            .filter(|_| (b.estimate(&p, 0.05, 0.01, &mut rng).unwrap().value - 0.7).abs() >= 0.05)
            .count();
        assert!(bad < 150, "{bad}");
    }
}
