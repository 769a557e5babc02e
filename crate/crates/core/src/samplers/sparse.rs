use std::cmp::Ordering;

use serde::Serialize;

use crate::circuits::{Outcome, OutcomePattern};
use crate::oracle::CategoricalSampler;
use crate::polybox::{EpsilonSampler, PolyBox};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Univariate polynomial with non-negative coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsityPolynomial {
    coefficients: Vec<f64>,
}

impl SparsityPolynomial {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::InvalidParameter("sparsity polynomial needs non-negative coefficients".into()));
        }
        Ok(SparsityPolynomial { coefficients })
    }

    /// The constant polynomial `t`, for families with a fixed support bound.
    pub fn constant(t: usize) -> Self {
        SparsityPolynomial {
            coefficients: vec![t as f64],
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Survivor cap per level of the prefix search: `2·ceil(2/threshold) + 2`.
pub fn survivor_cap(threshold: f64) -> usize {
    2 * (2.0 / threshold).ceil() as usize + 2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeavyPrefixes {
    /// Full-length outcomes with their leaf estimates, heaviest first.
    pub survivors: Vec<(Outcome, f64)>,
    /// Largest survivor count seen at any level.
    pub max_level_survivors: usize,
    pub queries: u64,
}

fn by_weight_then_lex(a: &(Vec<bool>, f64), b: &(Vec<bool>, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// Level-by-level search for prefixes whose probability is at least
/// `threshold`, querying `est` at precision `threshold/2`.
pub fn heavy_prefixes<P: PolyBox + ?Sized>(
    est: &P,
    threshold: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<HeavyPrefixes> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    let k = est.measured();
    let cap = survivor_cap(threshold);
    let query_delta = delta / (2 * k * cap) as f64;
    let mut level: Vec<(Vec<bool>, f64)> = vec![(Vec::new(), 1.0)];
    let mut max_level_survivors = 1;
    let mut queries = 0u64;
    for _ in 0..k {
        let mut next = Vec::with_capacity(2 * level.len());
        for (prefix, _) in &level {
            for bit in [false, true] {
                let mut ext = prefix.clone();
                ext.push(bit);
                let pattern = OutcomePattern::from_prefix_bits(&ext, k);
                let e = est.estimate(&pattern, threshold / 2.0, query_delta, rng)?;
                queries += 1;
                if e.value >= threshold {
                    next.push((ext, e.value));
                }
            }
        }
        next.sort_by(by_weight_then_lex);
        next.truncate(cap);
        max_level_survivors = max_level_survivors.max(next.len());
        level = next;
        if level.is_empty() {
            break;
        }
    }
    let survivors = level
        .into_iter()
        .map(|(bits, v)| (Outcome::from_bits(&bits).expect("k <= 64"), v))
        .collect();
    Ok(HeavyPrefixes {
        survivors,
        max_level_survivors,
        queries,
    })
}

/// Explicit sparse distribution built from one prefix search: the top `t`
/// survivors, negative estimates clamped to zero, renormalised. `None` when
/// nothing survives with positive weight.
pub fn sparse_distribution<P: PolyBox + ?Sized>(
    est: &P,
    t: usize,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<Option<Vec<(Outcome, f64)>>> {
    if t == 0 {
        return Err(Error::InvalidParameter("sparsity t must be at least 1".into()));
    }
    let heavy = heavy_prefixes(est, eps / (2.0 * t as f64), delta, rng)?;
    let mut leaves = heavy.survivors;
    leaves.truncate(t);
    for leaf in &mut leaves {
        leaf.1 = leaf.1.max(0.0);
    }
    let total: f64 = leaves.iter().map(|l| l.1).sum();
    if total <= 0.0 {
        return Ok(None);
    }
    Ok(Some(leaves.into_iter().map(|(o, w)| (o, w / total)).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SparseDraw {
    pub outcome: Outcome,
    /// Set when no heavy outcome was found and the all-zeros outcome was
    /// emitted instead; only possible if the sparsity promise fails.
    pub fallback: bool,
}

/// One sample from the sparse approximation of `est`'s distribution.
pub fn sparse_sample<P: PolyBox + ?Sized>(
    est: &P,
    t: usize,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<SparseDraw> {
    match sparse_distribution(est, t, eps, delta, rng)? {
        Some(leaves) => {
            let weights: Vec<f64> = leaves.iter().map(|l| l.1).collect();
            let i = CategoricalSampler::new(0, &weights).sample_index(rng);
            Ok(SparseDraw {
                outcome: leaves[i].0,
                fallback: false,
            })
        }
        None => Ok(SparseDraw {
            outcome: Outcome::zeros(est.measured()),
            fallback: true,
        }),
    }
}

/// Sparsity and inner precision used by [`epsilon_simulate`] for budget `eps_prime`.
pub fn epsilon_plan(sp: &SparsityPolynomial, k: usize, eps_prime: f64) -> Result<(usize, f64)> {
    if !(eps_prime > 0.0) {
        return Err(Error::InvalidParameter(format!("eps' must be positive, got {eps_prime}")));
    }
    let inner = eps_prime / 13.0;
    let t = sp.eval(k as f64 / inner).ceil().max(1.0);
    if t > 1e9 {
        return Err(Error::InvalidParameter(format!("sparsity bound {t:e} is too large")));
    }
    Ok((t as usize, inner))
}

/// `count` independent samples whose distribution is within `eps_prime` of
/// the target when the family obeys the sparsity bound `sp`: the budget is
/// split as `12·(eps'/13) + eps'/13`.
pub fn epsilon_simulate<P: PolyBox + ?Sized>(
    est: &P,
    sp: &SparsityPolynomial,
    eps_prime: f64,
    count: usize,
    rng: &mut StreamRng,
) -> Result<Vec<SparseDraw>> {
    let (t, inner) = epsilon_plan(sp, est.measured(), eps_prime)?;
    (0..count).map(|_| sparse_sample(est, t, inner, inner, rng)).collect()
}

/// [`epsilon_simulate`] as an [`EpsilonSampler`].
pub struct SparseSampler<P> {
    est: P,
    sp: SparsityPolynomial,
}

impl<P: PolyBox> SparseSampler<P> {
    pub fn new(est: P, sp: SparsityPolynomial) -> Self {
        SparseSampler { est, sp }
    }
}

impl<P: PolyBox> EpsilonSampler for SparseSampler<P> {
    fn measured(&self) -> usize {
        self.est.measured()
    }

    fn sample(&self, eps: f64, rng: &mut StreamRng) -> Result<Outcome> {
        let (t, inner) = epsilon_plan(&self.sp, self.est.measured(), eps)?;
        Ok(sparse_sample(&self.est, t, inner, inner, rng)?.outcome)
    }
}
