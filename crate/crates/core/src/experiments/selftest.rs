use serde::Serialize;

use super::{anticoncentration_report, run_hypothesis_test, BobMode};
use crate::circuits::{ce_encode, parse_circuit, Circuit, Outcome, OutcomePattern};
use crate::oracle::{exact_distribution, exact_probability, ExactDistribution, OracleConfig};
use crate::polybox::{ce_estimate, polybox_for, ExactPolyBox};
use crate::rng::{child_seed, stream};
use crate::samplers::{cdf_bitwise_from_r, conditional_chain_sample, CdfSamplerConfig};
use crate::stabcore::{random_clifford, ProductState};
use crate::stats::{chi_square_gof, outcome_counts};
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SelftestOptions {
    /// Replace the scheduled Bob with a visibly corrupted one; the
    /// indistinguishability check is then expected to fail.
    pub inject_corrupted_bob: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
    pub pass: bool,
}

fn check(name: &str, pass: bool, detail: String) -> SelftestCheck {
    SelftestCheck {
        name: name.to_string(),
        pass,
        detail,
    }
}

const GHZ: &str = "family prod\nqubits 3\nmeasure 3\nprep 2 bloch 0.6 0 0.8\ngate H 0\ngate CNOT 0 1\ngate S 1\ngate H 2\n";
const IQP: &str = "family iqp\nqubits 3\nmeasure 3\nxrow 1 1 0\nxrow 0 1 1\nxrow 1 0 0\n";

/// Fast subset of the acceptance checks. Failures are reported, not raised.
pub fn selftest(seed: u64, opts: SelftestOptions) -> Result<SelftestReport> {
    let cfg = OracleConfig::default();
    let mut checks = Vec::new();

    let mut rng = stream(seed, 0);
    let mut tableau_ok = true;
    for _ in 0..50 {
        let u = random_clifford(4, &mut rng)?;
        tableau_ok &= u.is_symplectic() && u.then(&u.inverse())?.is_identity();
    }
    checks.push(check("clifford_inverse", tableau_ok, "50 random 4-qubit tableaus".into()));

    for (name, text, pattern) in [("prod_polybox", GHZ, "1*0"), ("iqp_polybox", IQP, "10*")] {
        let c = parse_circuit(text)?;
        let pattern: OutcomePattern = pattern.parse()?;
        let exact = exact_probability(&c, &pattern, &cfg)?;
        let b = polybox_for(&c, cfg)?;
        let mut rng = stream(child_seed(seed, 1), name.len() as u64);
        let misses = (0..20)
            .filter(|_| match b.estimate(&pattern, 0.05, 0.01, &mut rng) {
                Ok(e) => (e.value - exact).abs() >= 0.05,
                Err(_) => true,
            })
            .count();
        checks.push(check(name, misses <= 2, format!("{misses}/20 estimates off by >= 0.05 from {exact}")));
    }

    let inner = parse_circuit(GHZ)?;
    let enc = ce_encode(inner)?;
    let encoded = Circuit::Encoded(enc.clone());
    let mut worst: f64 = 0.0;
    let mut ce_ok = true;
    for idx in 0..16u64 {
        let full = OutcomePattern::from_outcome(Outcome::new(idx, 4)?);
        let p = exact_probability(&encoded, &full, &cfg)?;
        let e = ce_estimate(&enc, &full, 0.2, &cfg)?;
        worst = worst.max((e.value - p).abs());
        ce_ok &= (e.value - p).abs() <= 0.0625f64.min(0.2);
    }
    checks.push(check("encoded_polybox", ce_ok, format!("max full-pattern error {worst}")));

    let d = ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4])?;
    let exact_box = ExactPolyBox::new(d);
    let cdf_cfg = CdfSamplerConfig::new(40, 0.0, 0.0)?;
    let a = cdf_bitwise_from_r(&exact_box, &cdf_cfg, 0.25, &mut rng)?.to_string();
    let b = cdf_bitwise_from_r(&exact_box, &cdf_cfg, 0.5, &mut rng)?.to_string();
    checks.push(check("cdf_inversion", a == "01" && b == "10", format!("0.25 -> {a}, 0.5 -> {b}")));

    let c = parse_circuit(GHZ)?;
    let dist = exact_distribution(&c, &cfg)?;
    let chain_box = ExactPolyBox::new(dist.clone());
    let mut rng = stream(child_seed(seed, 2), 0);
    let draws: Vec<Outcome> = (0..20_000)
        .map(|_| conditional_chain_sample(&chain_box, 0.0, 0.0, &mut rng))
        .collect::<Result<_>>()?;
    let chi = chi_square_gof(&outcome_counts(3, &draws), dist.probs())?;
    checks.push(check("chain_sampler", chi.passes(0.001), format!("chi2 p-value {:.4}", chi.p_value)));

    let ac = anticoncentration_report(&ProductState::zeros(3), 400, &[0.25, 0.5, 0.75], child_seed(seed, 3), &cfg)?;
    checks.push(check(
        "anticoncentration",
        ac.pass,
        format!("mean {:.4} vs {:.4}", ac.mean, ac.mean_expected),
    ));

    let delta = 0.05;
    let trials = 20_000;
    let corrupted = run_hypothesis_test(&dist, BobMode::Corrupted { l1: 0.4 }, delta, trials, 1, child_seed(seed, 4))?;
    checks.push(check(
        "corrupted_bob_detected",
        corrupted.p_correct > 0.5 + 3.0 * corrupted.sigma,
        format!("P_correct {:.4}", corrupted.p_correct),
    ));
    let bob = if opts.inject_corrupted_bob {
        BobMode::Corrupted { l1: 0.8 }
    } else {
        BobMode::Scheduled
    };
    let scheduled = run_hypothesis_test(&dist, bob, delta, trials, 1, child_seed(seed, 5))?;
    checks.push(check(
        "scheduled_bob_indistinguishable",
        scheduled.p_correct <= 0.5 + delta + 3.0 * scheduled.sigma,
        format!("P_correct {:.4} (limit {:.4})", scheduled.p_correct, 0.5 + delta),
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(SelftestReport { seed, checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_and_injection_fails() {
        let ok = selftest(7, SelftestOptions::default()).unwrap();
        assert!(ok.pass, "{ok:#?}");
        let bad = selftest(7, SelftestOptions { inject_corrupted_bob: true }).unwrap();
        assert!(!bad.pass);
        let failed: Vec<_> = bad.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["scheduled_bob_indistinguishable"]);
    }
}
