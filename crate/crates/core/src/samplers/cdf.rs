use rand::Rng;
use serde::Serialize;

use crate::circuits::{Outcome, OutcomePattern};
use crate::polybox::PolyBox;
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Discretisation and estimator precision for [`cdf_bitwise_sample`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CdfSamplerConfig {
    /// Bits of the uniform draw `r`.
    pub m: u32,
    pub eps: f64,
    pub delta: f64,
}

impl CdfSamplerConfig {
    pub fn new(m: u32, eps: f64, delta: f64) -> Result<Self> {
        if !(1..=64).contains(&m) {
            return Err(Error::InvalidParameter(format!("m must lie in 1..=64, got {m}")));
        }
        if !(eps >= 0.0) || !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("bad precision eps={eps} delta={delta}")));
        }
        Ok(CdfSamplerConfig { m, eps, delta })
    }
}

/// `r = Σ_{i=1}^{m} r̃_i 2^{-i}` for uniform bits `r̃`.
pub fn draw_r(m: u32, rng: &mut StreamRng) -> f64 {
    let bits = rng.gen::<u64>() >> (64 - m);
    bits as f64 * 2f64.powi(-(m as i32))
}

/// Inverts the lexicographic CDF at `r` one bit at a time.
///
/// With `L` the lower edge of the interval of the current prefix and `q_j`
/// the estimated probability of extending it by 0, bit `j` is 0 iff
/// `r < L + q_j`; otherwise it is 1 and `L` grows by `q_j`. Comparing `r`
/// with `q_j` alone, without the running offset `L`, does not invert the
/// CDF: on `(0.1, 0.2, 0.3, 0.4)` it sends `r = 0.5` to `11` instead of `10`.
pub fn cdf_bitwise_from_r<P: PolyBox + ?Sized>(
    strong: &P,
    cfg: &CdfSamplerConfig,
    r: f64,
    rng: &mut StreamRng,
) -> Result<Outcome> {
    let k = strong.measured();
    let mut bits = Vec::with_capacity(k);
    let mut lower = 0.0;
    #[allow(clippy::same_item_push)] // the pushed bit may be flipped below
    for _ in 0..k {
        bits.push(false);
        let pattern = OutcomePattern::from_prefix_bits(&bits, k);
        let q = strong.estimate(&pattern, cfg.eps, cfg.delta, rng)?.value;
        if r >= lower + q {
            *bits.last_mut().expect("just pushed") = true;
            lower += q;
        }
    }
    Outcome::from_bits(&bits)
}

pub fn cdf_bitwise_sample<P: PolyBox + ?Sized>(
    strong: &P,
    cfg: &CdfSamplerConfig,
    rng: &mut StreamRng,
) -> Result<Outcome> {
    let r = draw_r(cfg.m, rng);
    cdf_bitwise_from_r(strong, cfg, r, rng)
}
