use rand::Rng;

use crate::circuits::{Outcome, OutcomePattern};
use crate::polybox::PolyBox;
use crate::rng::StreamRng;
use crate::Result;

/// Ancestral sampling from prefix-marginal ratios.
///
/// With `q_{j-1}` the estimated probability of the prefix chosen so far
/// (`q_0 = 1`) and `q_j` that of its extension by 0, bit `j` is 0 iff
/// `clamp(q_j / q_{j-1}, 0, 1) >= r` for a fresh `r` in `(0, 1]`. An
/// unreachable prefix (`q_{j-1} <= 0`) gives ratio 0.
pub fn conditional_chain_sample<P: PolyBox + ?Sized>(
    mult: &P,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<Outcome> {
    let k = mult.measured();
    let mut bits = Vec::with_capacity(k);
    let mut q_prev = 1.0;
    #[allow(clippy::same_item_push)] // the pushed bit may be flipped below
    for _ in 0..k {
        bits.push(false);
        let zero = OutcomePattern::from_prefix_bits(&bits, k);
        let q0 = mult.estimate(&zero, eps, delta, rng)?.value;
        let c = if q_prev > 0.0 { (q0 / q_prev).clamp(0.0, 1.0) } else { 0.0 };
        let r = 1.0 - rng.gen::<f64>();
        if c >= r {
            q_prev = q0;
        } else {
            *bits.last_mut().expect("just pushed") = true;
            let one = OutcomePattern::from_prefix_bits(&bits, k);
            q_prev = mult.estimate(&one, eps, delta, rng)?.value;
        }
    }
    Outcome::from_bits(&bits)
}
