//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! of them fails. Runs without the libtest harness so the lines always show.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use bornbox::circuits::{ce_encode, Outcome, OutcomePattern, Trit};
use bornbox::experiments::{
    anticoncentration_report, run_hypothesis_test, schedule_partial_sum, transcript_l1, BobMode,
};
use bornbox::oracle::{encoded_first_bit, encoded_probability_from, exact_distribution, exact_probability, OracleConfig};
use bornbox::polybox::{
    hoeffding_samples, EncodedPolyBox, iqp_single_sample, BoundedNoisePolyBox, ExactPolyBox, IqpPolyBox, PolyBox,
    ProdPolyBox,
};
use bornbox::rng::{child_seed, stream, StreamRng};
use bornbox::samplers::{cdf_bitwise_from_r, cdf_bitwise_sample, conditional_chain_sample, sparse_sample, CdfSamplerConfig};
use bornbox::stats::{binomial_sigma, chi_square_gof, empirical_l1, mean_and_stderr, outcome_counts};
use bornbox::{BinaryMatrix, Circuit, ExactDistribution, Gate, IqpCircuit, ProdCircuit, ProductState};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn bloch_ball(rng: &mut StreamRng) -> [f64; 3] {
    let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    let s = (1.0 - z * z).sqrt();
    let r = rng.gen::<f64>().cbrt();
    [r * s * phi.cos(), r * s * phi.sin(), r * z]
}

fn bloch_sphere(rng: &mut StreamRng) -> [f64; 3] {
    let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

fn random_gate(qubits: &[usize], rng: &mut StreamRng) -> Gate {
    let a = *qubits.choose(rng).unwrap();
    let mut b = *qubits.choose(rng).unwrap();
    while b == a && qubits.len() > 1 {
        b = *qubits.choose(rng).unwrap();
    }
    match rng.gen_range(0..if qubits.len() > 1 { 6 } else { 4 }) {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::X(a),
        3 => Gate::Z(a),
        4 => Gate::Cnot(a, b),
        _ => Gate::Cz(a, b),
    }
}

fn random_prod(n: usize, gates: usize, rng: &mut StreamRng) -> Circuit {
    let prep = ProductState::new((0..n).map(|_| bloch_ball(rng)).collect()).unwrap();
    let all: Vec<usize> = (0..n).collect();
    let gates = (0..gates).map(|_| random_gate(&all, rng)).collect();
    ProdCircuit::new(prep, gates, n).unwrap().into()
}

fn random_pattern(k: usize, rng: &mut StreamRng) -> OutcomePattern {
    let trits = (0..k)
        .map(|_| match rng.gen_range(0..3) {
            0 => Trit::Zero,
            1 => Trit::One,
            _ => Trit::Wild,
        })
        .collect();
    OutcomePattern::new(trits).unwrap()
}

/// Worst per-instance violation count over `reps` estimates, against the
/// limit `delta + 3 sigma`.
fn coverage<P: PolyBox>(boxes: &[(P, OutcomePattern, f64)], reps: u64, eps: f64, delta: f64, seed: u64) -> (bool, String) {
    let limit = delta + 3.0 * binomial_sigma(delta, reps);
    let rates: Vec<f64> = boxes
        .par_iter()
        .enumerate()
        .map(|(i, (b, pattern, exact))| {
            let mut rng = stream(seed, i as u64);
            let misses = (0..reps)
                .filter(|_| (b.estimate(pattern, eps, delta, &mut rng).unwrap().value - exact).abs() >= eps)
                .count();
            misses as f64 / reps as f64
        })
        .collect();
    let worst = rates.iter().cloned().fold(0.0, f64::max);
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    (
        worst <= limit,
        format!("{} instances, worst violation rate {worst:.4}, mean {mean:.5}, limit {limit:.4}", rates.len()),
    )
}

fn criterion_1(cfg: &OracleConfig) -> Verdict {
    let (eps, delta) = (0.05, 0.01);
    let s = hoeffding_samples(eps, delta, 2.0).unwrap();
    let mut rng = stream(child_seed(SEED, 1), 0);
    let boxes: Vec<_> = (0..50)
        .map(|_| {
            let c = random_prod(4, 30, &mut rng);
            let mut pattern = random_pattern(4, &mut rng);
            if !pattern.has_wildcard() {
                pattern.set(rng.gen_range(0..4), Trit::Wild);
            }
            let exact = exact_probability(&c, &pattern, cfg).unwrap();
            let Circuit::Prod(p) = c else { unreachable!() };
            (ProdPolyBox::new(p), pattern, exact)
        })
        .collect();
    let (pass, detail) = coverage(&boxes, 200, eps, delta, child_seed(SEED, 2));
    verdict(pass && s == 4239, format!("s = {s}, {detail}"))
}

fn random_program(rng: &mut StreamRng) -> IqpCircuit {
    loop {
        let rows: Vec<Vec<u8>> = (0..6).map(|_| (0..4).map(|_| rng.gen_range(0..2)).collect()).collect();
        if rows.iter().all(|r| r.contains(&1)) {
            return IqpCircuit::new(BinaryMatrix::from_rows(&rows).unwrap(), 4).unwrap();
        }
    }
}

fn criterion_2(cfg: &OracleConfig) -> Verdict {
    let (eps, delta) = (0.05, 0.01);
    let mut rng = stream(child_seed(SEED, 3), 0);
    let instances: Vec<(IqpCircuit, OutcomePattern, f64)> = (0..20)
        .map(|_| {
            let c = random_program(&mut rng);
            let pattern = random_pattern(4, &mut rng);
            let exact = exact_probability(&c.clone().into(), &pattern, cfg).unwrap();
            (c, pattern, exact)
        })
        .collect();
    let boxes: Vec<_> = instances
        .iter()
        .map(|(c, p, e)| (IqpPolyBox::new(c.clone()).unwrap(), p.clone(), *e))
        .collect();
    let (cover, detail) = coverage(&boxes, 200, eps, delta, child_seed(SEED, 4));
    let worst_z = instances
        .par_iter()
        .enumerate()
        .map(|(i, (c, pattern, exact))| {
            let mut rng = stream(child_seed(SEED, 5), i as u64);
            let draws: Vec<f64> = (0..100_000).map(|_| iqp_single_sample(c, pattern, &mut rng).unwrap()).collect();
            let (mean, se) = mean_and_stderr(&draws);
            if se == 0.0 {
                if (mean - exact).abs() < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (mean - exact).abs() / se
            }
        })
        .reduce(|| 0.0, f64::max);
    verdict(
        cover && worst_z <= 5.0,
        format!("{detail}; single-draw bias worst {worst_z:.2} standard errors (limit 5)"),
    )
}

fn all_patterns(k: usize) -> Vec<OutcomePattern> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Trit>| {
                [Trit::Zero, Trit::One, Trit::Wild].map(|t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(|t| OutcomePattern::new(t).unwrap()).collect()
}

fn criterion_3(cfg: &OracleConfig) -> Verdict {
    let mut rng = stream(child_seed(SEED, 6), 0);
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for n in 1..=8usize {
        for variant in 0..2 {
            let prep = if variant == 0 {
                ProductState::zeros(n)
            } else {
                ProductState::new((0..n).map(|_| bloch_ball(&mut rng)).collect()).unwrap()
            };
            let all: Vec<usize> = (0..n).collect();
            let gates = (0..4 * n).map(|_| random_gate(&all, &mut rng)).collect();
            let inner: Circuit = ProdCircuit::new(prep, gates, n).unwrap().into();
            let enc = ce_encode(inner).unwrap();
            let p1 = encoded_first_bit(&enc, cfg).unwrap();
            let b = EncodedPolyBox::new(enc.clone(), *cfg);
            let scale = 0.5f64.powi(n as i32);
            let eps_grid = [0.3, scale, scale / 2.0, 0.01];
            let patterns = all_patterns(n + 1);
            let bad: Vec<String> = patterns
                .par_iter()
                .flat_map_iter(|pattern| {
                    let (b, enc) = (&b, &enc);
                    let exact = encoded_probability_from(enc, pattern, p1).unwrap();
                    let mut rng = stream(0, 0);
                    eps_grid.iter().filter_map(move |&eps| {
                        let e = b.estimate(pattern, eps, 0.0, &mut rng).unwrap();
                        let err = (e.value - exact).abs();
                        let ok = if pattern.has_wildcard() {
                            err == 0.0
                        } else {
                            err <= (scale / 2.0).min(eps)
                        };
                        (!ok).then(|| format!("n={n} {pattern} eps={eps}: error {err:e}"))
                    })
                })
                .collect();
            checked += patterns.len() * eps_grid.len();
            failures.extend(bad);
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    verdict(
        failures.is_empty(),
        format!("{checked} (circuit, pattern, eps) checks, {} failures {first}", failures.len()),
    )
}

fn criterion_4(cfg: &OracleConfig) -> Verdict {
    let (eps, delta, t, draws) = (0.05, 0.01, 8usize, 100_000u64);
    let allowance = 3.0 * (64.0f64 / draws as f64).sqrt();
    let limit = 12.0 * eps + delta + allowance;
    let mut rng = stream(child_seed(SEED, 7), 0);
    let instances: Vec<Circuit> = (0..10)
        .map(|_| {
            let mut active: Vec<usize> = (0..6).collect();
            active.shuffle(&mut rng);
            active.truncate(3);
            let mut prep = ProductState::zeros(6);
            for &q in &active {
                prep.set_bloch(q, bloch_ball(&mut rng)).unwrap();
            }
            let mut gates: Vec<Gate> = (0..12).map(|_| random_gate(&active, &mut rng)).collect();
            gates.extend((0..6).filter(|_| rng.gen_bool(0.5)).map(Gate::X));
            ProdCircuit::new(prep, gates, 6).unwrap().into()
        })
        .collect();
    let results: Vec<(f64, usize, u64)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let d = exact_distribution(c, cfg).unwrap();
            let b = BoundedNoisePolyBox::new(d.clone());
            let samples: Vec<(Outcome, bool)> = (0..draws)
                .into_par_iter()
                .map(|j| {
                    let mut rng = stream(child_seed(child_seed(SEED, 8), i as u64), j);
                    let s = sparse_sample(&b, t, eps, delta, &mut rng).unwrap();
                    (s.outcome, s.fallback)
                })
                .collect();
            let outcomes: Vec<Outcome> = samples.iter().map(|s| s.0).collect();
            let fallbacks = samples.iter().filter(|s| s.1).count() as u64;
            (empirical_l1(&outcome_counts(6, &outcomes), &d), d.support_size(), fallbacks)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let support = results.iter().map(|r| r.1).max().unwrap_or(0);
    let fallbacks: u64 = results.iter().map(|r| r.2).sum();
    verdict(
        worst <= limit && support <= 8,
        format!("worst L1 {worst:.4} (limit {limit:.4}), max support {support}, fallbacks {fallbacks}"),
    )
}

fn full_support_instances(cfg: &OracleConfig, label: u64) -> Vec<ExactDistribution> {
    let mut rng = stream(child_seed(SEED, label), 0);
    [2usize, 3, 4]
        .iter()
        .map(|&n| {
            let prep = ProductState::new((0..n).map(|_| bloch_ball(&mut rng)).collect()).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let gates = (0..3 * n).map(|_| random_gate(&all, &mut rng)).collect();
            let c: Circuit = ProdCircuit::new(prep, gates, n).unwrap().into();
            exact_distribution(&c, cfg).unwrap()
        })
        .collect()
}

fn chi_square_sampler<F>(dists: &[ExactDistribution], label: u64, draw: F) -> (bool, String)
where
    F: Fn(&ExactPolyBox, &mut StreamRng) -> Outcome,
{
    let mut worst_p: f64 = 1.0;
    let mut cells = Vec::new();
    for (i, d) in dists.iter().enumerate() {
        let b = ExactPolyBox::new(d.clone());
        let mut rng = stream(child_seed(SEED, label), i as u64);
        let outcomes: Vec<Outcome> = (0..100_000).map(|_| draw(&b, &mut rng)).collect();
        let counts = outcome_counts(d.measured(), &outcomes);
        let chi = chi_square_gof(&counts, d.probs()).unwrap();
        if std::env::var_os("ACCEPTANCE_DEBUG").is_some() {
            eprintln!("{i}: p {} counts {counts:?} probs {:?}", chi.p_value, d.probs());
        }
        worst_p = worst_p.min(if chi.impossible > 0 { 0.0 } else { chi.p_value });
        cells.push(d.support_size());
    }
    (worst_p >= 0.01, format!("supports {cells:?}, min chi-square p-value {worst_p:.4}"))
}

fn criterion_5(cfg: &OracleConfig) -> Verdict {
    let dists = full_support_instances(cfg, 9);
    let scfg = CdfSamplerConfig::new(40, 0.0, 0.0).unwrap();
    let (chi_ok, detail) = chi_square_sampler(&dists, 10, |b, rng| cdf_bitwise_sample(b, &scfg, rng).unwrap());
    let hand = ExactPolyBox::new(ExactDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap());
    let mut rng = stream(SEED, 0);
    let a = cdf_bitwise_from_r(&hand, &scfg, 0.25, &mut rng).unwrap().to_string();
    let b = cdf_bitwise_from_r(&hand, &scfg, 0.5, &mut rng).unwrap().to_string();
    verdict(
        chi_ok && a == "01" && b == "10",
        format!("{detail}; r=0.25 -> {a}, r=0.5 -> {b}"),
    )
}

fn criterion_6(cfg: &OracleConfig) -> Verdict {
    let dists = full_support_instances(cfg, 11);
    let (pass, detail) = chi_square_sampler(&dists, 12, |b, rng| conditional_chain_sample(b, 0.0, 0.0, rng).unwrap());
    verdict(pass, detail)
}

fn criterion_7(cfg: &OracleConfig) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [3usize, 4, 5] {
        let mut rng = stream(child_seed(SEED, 13), n as u64);
        let state = ProductState::new((0..n).map(|_| bloch_sphere(&mut rng)).collect()).unwrap();
        let r = anticoncentration_report(&state, 2000, &[0.25, 0.5, 0.75], child_seed(SEED, 14 + n as u64), cfg).unwrap();
        let rows: Vec<String> = r.rows.iter().map(|row| format!("{:.3}>{:.3}", row.fraction, row.bound)).collect();
        parts.push(format!(
            "n={n}: exceedance [{}], mean z {:.2}, second moment z {:.2}",
            rows.join(" "),
            (r.mean - r.mean_expected) / r.mean_stderr,
            (r.second_moment - r.second_moment_expected) / r.second_moment_stderr
        ));
        pass &= r.pass;
    }
    verdict(pass, parts.join("; "))
}

fn criterion_8(cfg: &OracleConfig) -> Verdict {
    let c: Circuit = ProdCircuit::new(
        ProductState::zeros(3),
        vec![Gate::H(0), Gate::H(1), Gate::H(2), Gate::Cnot(0, 1)],
        3,
    )
    .unwrap()
    .into();
    let alice = exact_distribution(&c, cfg).unwrap();
    let delta = 0.05;
    let trials = 100_000;
    let exact = run_hypothesis_test(&alice, BobMode::Exact, delta, trials, 1, child_seed(SEED, 20)).unwrap();
    let corrupted = run_hypothesis_test(&alice, BobMode::Corrupted { l1: 0.4 }, delta, trials, 1, child_seed(SEED, 21)).unwrap();
    let scheduled = run_hypothesis_test(&alice, BobMode::Scheduled, delta, trials, 1, child_seed(SEED, 22)).unwrap();
    let sigma = binomial_sigma(0.5, trials);
    let sigma_c = binomial_sigma(0.6, trials);
    let partial = schedule_partial_sum(1_000_000, delta).unwrap();
    let bob: Vec<ExactDistribution> = (1..=2)
        .map(|j| BobMode::Scheduled.round_distribution(&alice, j, delta).unwrap())
        .collect();
    let two_round = transcript_l1(&[alice.clone(), alice.clone()], &bob).unwrap();
    let ok_exact = (exact.p_correct - 0.5).abs() <= 3.0 * sigma;
    let ok_corrupt = (corrupted.p_correct - 0.6).abs() <= 3.0 * sigma_c;
    let ok_sched = scheduled.p_correct <= 0.5 + delta + 3.0 * scheduled.sigma;
    let ok_sum = partial <= 4.0 * delta && two_round <= 4.0 * delta;
    verdict(
        ok_exact && ok_corrupt && ok_sched && ok_sum,
        format!(
            "exact {:.4}, corrupted {:.4}, scheduled {:.4}, partial sum {partial:.6} <= {:.2}, two-round L1 {two_round:.4}",
            exact.p_correct,
            corrupted.p_correct,
            scheduled.p_correct,
            4.0 * delta
        ),
    )
}

fn criterion_9() -> Verdict {
    let circuits = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("circuits");
    let ghz = circuits.join("ghz.qc").display().to_string();
    let iqp = circuits.join("iqp3.qc").display().to_string();
    let mixed = circuits.join("mixed.qc").display().to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["estimate", "--circuit", &ghz, "--pattern", "1*1"],
        vec!["estimate", "--circuit", &iqp, "--pattern", "0*1", "--eps", "0.1"],
        vec!["sample", "--circuit", &mixed, "--count", "40"],
        vec!["sample", "--circuit", &mixed, "--method", "cdf", "--count", "40"],
        vec!["sample", "--circuit", &ghz, "--method", "chain", "--estimator", "noisy", "--count", "40"],
        vec!["experiment", "anticoncentration", "--n", "3", "--trials", "300", "--random-input"],
        vec!["experiment", "distinguish", "--circuit", &ghz, "--bob", "corrupted", "--trials", "20000"],
        vec!["experiment", "sparsity", "--circuit", &mixed],
        vec!["selftest"],
    ];
    let run = |args: &[&str], threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bornbox"))
            .args(["--seed", "17", "--threads", threads])
            .args(args)
            .output()
            .expect("run bornbox");
        if !out.status.success() {
            eprintln!("{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        }
        (out.status.success(), out.stdout)
    };
    let mut bad = Vec::new();
    for args in &invocations {
        let runs = [run(args, "1"), run(args, "1"), run(args, "8"), run(args, "8")];
        if !runs.iter().all(|r| r.0 && !r.1.is_empty() && r.1 == runs[0].1) {
            bad.push(args[..2].join(" "));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{} invocations x 4 runs at 1 and 8 workers, mismatched: {bad:?}", invocations.len()),
    )
}

fn main() {
    let cfg = OracleConfig::default();
    let criteria: Vec<(u32, Box<dyn Fn() -> Verdict>)> = vec![
        (1, Box::new(|| criterion_1(&cfg))),
        (2, Box::new(|| criterion_2(&cfg))),
        (3, Box::new(|| criterion_3(&cfg))),
        (4, Box::new(|| criterion_4(&cfg))),
        (5, Box::new(|| criterion_5(&cfg))),
        (6, Box::new(|| criterion_6(&cfg))),
        (7, Box::new(|| criterion_7(&cfg))),
        (8, Box::new(|| criterion_8(&cfg))),
        (9, Box::new(criterion_9)),
    ];
    // numeric arguments select a subset; anything else is ignored
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, check) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let r = check();
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} ({:.1}s) {}", start.elapsed().as_secs_f64(), r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} of {ran} criteria pass", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
