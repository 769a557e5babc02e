//! Additive-precision Born probability estimators ("poly-boxes").
//!
//! A poly-box answers `(pattern, eps, delta)` with an estimate `p̂` such that
//! `Pr(|p̂ - p| >= eps) <= delta`, where `p` is the probability of the event
//! described by `pattern`.

mod encoded;
mod frequency;
mod iqp;
mod oracle_backed;
mod prod;

use serde::Serialize;

pub use encoded::{ce_estimate, EncodedPolyBox};
pub use frequency::{frequency_polybox, EpsilonSampler, ExactSampler, FrequencyPolyBox};
pub use iqp::{
    affinify, alpha_weight_enumerator, iqp_correlator, iqp_estimate, iqp_single_sample, IqpPolyBox,
    ENUMERATION_LIMIT,
};
pub use oracle_backed::{BoundedNoisePolyBox, ExactPolyBox};
pub use prod::{prod_estimate, prod_single_sample, ProdPolyBox};

use crate::circuits::{Circuit, OutcomePattern};
use crate::oracle::OracleConfig;
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Output of one poly-box query.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub eps: f64,
    pub delta: f64,
    pub samples_used: u64,
}

pub trait PolyBox: Send + Sync {
    /// Number of measured bits; patterns must have this length.
    fn measured(&self) -> usize;

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate>;
}

impl<T: PolyBox + ?Sized> PolyBox for &T {
    fn measured(&self) -> usize {
        (**self).measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        (**self).estimate(pattern, eps, delta, rng)
    }
}

impl<T: PolyBox + ?Sized> PolyBox for Box<T> {
    fn measured(&self) -> usize {
        (**self).measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        (**self).estimate(pattern, eps, delta, rng)
    }
}

/// Hoeffding sample count for i.i.d. draws in a range of the given width:
/// `max(1, ceil(width² / (2 eps²) · ln(2 / delta)))`.
pub fn hoeffding_samples(eps: f64, delta: f64, range_width: f64) -> Result<u64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !(range_width > 0.0) || !range_width.is_finite() {
        return Err(Error::InvalidParameter(format!("range width must be positive, got {range_width}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let s = (range_width * range_width / (2.0 * eps * eps) * (2.0 / delta).ln()).ceil();
    if s > u64::MAX as f64 / 2.0 {
        return Err(Error::InvalidParameter(format!("sample count {s:e} is not representable")));
    }
    Ok((s as u64).max(1))
}

/// Shared argument check for sampling estimators (`eps > 0`, `0 < delta < 1`).
pub(crate) fn check_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Mean of `s` draws of `draw`, summed in a fixed order.
pub(crate) fn mean_of<F>(s: u64, mut draw: F) -> Result<f64>
where
    F: FnMut() -> Result<f64>,
{
    let mut sum = 0.0;
    for _ in 0..s {
        sum += draw()?;
    }
    Ok(sum / s as f64)
}

/// The native estimator for a circuit's family.
pub fn polybox_for(c: &Circuit, cfg: OracleConfig) -> Result<Box<dyn PolyBox>> {
    Ok(match c {
        Circuit::Prod(p) => Box::new(ProdPolyBox::new(p.clone())),
        Circuit::Iqp(q) => Box::new(IqpPolyBox::new(q.clone())?),
        Circuit::Encoded(e) => Box::new(EncodedPolyBox::new(e.clone(), cfg)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_samples(0.1, 0.05, 2.0).unwrap(), 738);
        let d = 2.0 * (-2.0f64).exp();
        assert_eq!(hoeffding_samples(1.0, d, 2.0).unwrap(), 4);
        assert_eq!(hoeffding_samples(0.5, 3.0, 1.0).unwrap(), 1);
        assert_eq!(hoeffding_samples(0.05, 0.01, 2.0).unwrap(), 4239);
        assert!(hoeffding_samples(0.0, 0.1, 2.0).is_err());
        assert!(hoeffding_samples(0.1, 0.1, -1.0).is_err());
    }
}
