use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use bornbox::circuits::parse_circuit_file;
use bornbox::experiments::{
    anticoncentration_report, run_hypothesis_test, selftest, sparsity_profile, BobMode, SelftestOptions,
};
use bornbox::oracle::{exact_distribution, exact_probability, OracleConfig};
use bornbox::polybox::{polybox_for, BoundedNoisePolyBox, ExactPolyBox, PolyBox};
use bornbox::rng::{child_seed, stream};
use bornbox::samplers::{
    cdf_bitwise_sample, conditional_chain_sample, epsilon_plan, sparse_sample, CdfSamplerConfig, SparsityPolynomial,
};
use bornbox::{Circuit, Error, OutcomePattern, ProductState, Result};
use rand::Rng;

use crate::{
    AntiArgs, BobKind, Command, DistinguishArgs, EstimateArgs, EstimatorKind, Experiment, Method, OracleArgs,
    SampleArgs, SelftestArgs, SparsityArgs,
};

/// Exit status for an error: 2 for malformed input, 1 otherwise.
pub fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Pattern(_)
        | Error::Parse { .. }
        | Error::UnknownGate(_)
        | Error::RepeatedQubit(_)
        | Error::QubitOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidParameter(_) => 2,
        _ => 1,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable report")
}

fn result(command: &str, parameters: Value, seed: u64, payload: Value) -> Value {
    json!({
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "payload": payload,
    })
}

fn load(path: &Path) -> Result<Circuit> {
    parse_circuit_file(path)
}

pub fn run(cmd: &Command, seed: u64) -> Result<Vec<Value>> {
    let cfg = OracleConfig::from_env()?;
    match cmd {
        Command::Estimate(a) => estimate(a, seed, cfg),
        Command::Sample(a) => sample(a, seed, cfg),
        Command::Oracle(a) => oracle(a, seed, cfg),
        Command::Experiment(Experiment::Anticoncentration(a)) => anticoncentration(a, seed, cfg),
        Command::Experiment(Experiment::Sparsity(a)) => sparsity(a, seed, cfg),
        Command::Experiment(Experiment::Distinguish(a)) => distinguish(a, seed, cfg),
        Command::Selftest(a) => run_selftest(a, seed),
    }
}

fn estimate(a: &EstimateArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let pattern: OutcomePattern = a.pattern.parse()?;
    let c = load(&a.circuit)?;
    if let Some(f) = &a.family {
        if f != c.family() {
            return Err(Error::InvalidParameter(format!("circuit file has family {}, not {f}", c.family())));
        }
    }
    c.check_pattern(&pattern)?;
    let b = polybox_for(&c, cfg)?;
    let e = b.estimate(&pattern, a.eps, a.delta, &mut stream(seed, 0))?;
    let params = json!({
        "circuit": a.circuit.display().to_string(),
        "family": c.family(),
        "pattern": pattern.to_string(),
        "eps": a.eps,
        "delta": a.delta,
    });
    Ok(vec![result("estimate", params, seed, to_value(&e))])
}

fn sample(a: &SampleArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let c = load(&a.circuit)?;
    let kind = a.estimator.unwrap_or(EstimatorKind::Exact);
    let est: Box<dyn PolyBox> = match kind {
        EstimatorKind::Native => polybox_for(&c, cfg)?,
        EstimatorKind::Exact => Box::new(ExactPolyBox::from_circuit(&c, &cfg)?),
        EstimatorKind::Noisy => Box::new(BoundedNoisePolyBox::from_circuit(&c, &cfg)?),
    };
    let sp = SparsityPolynomial::constant(a.t);
    let (t, inner) = epsilon_plan(&sp, est.measured(), a.eps)?;
    let cdf_cfg = CdfSamplerConfig::new(a.m, a.query_eps, a.query_delta)?;
    let draws: Vec<(String, bool)> = (0..a.count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            match a.method {
                Method::Sparse => sparse_sample(&est, t, inner, inner, &mut rng).map(|d| (d.outcome.to_string(), d.fallback)),
                Method::Cdf => cdf_bitwise_sample(&est, &cdf_cfg, &mut rng).map(|o| (o.to_string(), false)),
                Method::Chain => conditional_chain_sample(&est, a.query_eps, a.query_delta, &mut rng).map(|o| (o.to_string(), false)),
            }
        })
        .collect::<Result<_>>()?;
    let method = match a.method {
        Method::Sparse => "sparse",
        Method::Cdf => "cdf",
        Method::Chain => "chain",
    };
    let estimator = match kind {
        EstimatorKind::Native => "native",
        EstimatorKind::Exact => "exact",
        EstimatorKind::Noisy => "noisy",
    };
    let params = json!({
        "circuit": a.circuit.display().to_string(),
        "method": method,
        "estimator": estimator,
        "count": a.count,
        "eps": a.eps,
        "t": a.t,
        "m": a.m,
        "query_eps": a.query_eps,
        "query_delta": a.query_delta,
    });
    let fallbacks = draws.iter().filter(|d| d.1).count();
    let mut lines = vec![result(
        "sample",
        params,
        seed,
        json!({ "count": draws.len(), "fallbacks": fallbacks }),
    )];
    lines.extend(
        draws
            .into_iter()
            .enumerate()
            .map(|(i, (outcome, fallback))| json!({ "index": i, "outcome": outcome, "fallback": fallback })),
    );
    Ok(lines)
}

fn oracle(a: &OracleArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let c = load(&a.circuit)?;
    let mut params = json!({ "circuit": a.circuit.display().to_string(), "family": c.family() });
    let payload = match &a.pattern {
        Some(p) => {
            let pattern: OutcomePattern = p.parse()?;
            params["pattern"] = json!(pattern.to_string());
            json!({ "value": exact_probability(&c, &pattern, &cfg)? })
        }
        None => {
            let d = exact_distribution(&c, &cfg)?;
            let support: Vec<Value> = d.support().map(|(o, p)| json!([o.to_string(), p])).collect();
            json!({ "measured": d.measured(), "support": support })
        }
    };
    Ok(vec![result("oracle", params, seed, payload)])
}

fn anticoncentration(a: &AntiArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let state = if a.random_input {
        let mut rng = stream(child_seed(seed, 1), 0);
        let bloch = (0..a.n)
            .map(|_| {
                let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
                let phi: f64 = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                let s = (1.0 - z * z).sqrt();
                [s * phi.cos(), s * phi.sin(), z]
            })
            .collect();
        ProductState::new(bloch)?
    } else {
        ProductState::zeros(a.n)
    };
    let r = anticoncentration_report(&state, a.trials, &a.alphas, seed, &cfg)?;
    let params = json!({ "n": a.n, "trials": a.trials, "alphas": a.alphas, "random_input": a.random_input });
    let mut metrics: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "name": format!("exceedance_alpha_{}", row.alpha),
                "value": row.fraction,
                "bound": row.bound,
                "pass": row.pass,
            })
        })
        .collect();
    metrics.push(json!({
        "name": "mean_px",
        "value": r.mean,
        "bound": r.mean_expected,
        "pass": (r.mean - r.mean_expected).abs() <= 3.0 * r.mean_stderr,
    }));
    metrics.push(json!({
        "name": "second_moment_px",
        "value": r.second_moment,
        "bound": r.second_moment_expected,
        "pass": (r.second_moment - r.second_moment_expected).abs() <= 3.0 * r.second_moment_stderr,
    }));
    let payload = json!({ "experiment": "anticoncentration", "metrics": metrics, "report": to_value(&r), "pass": r.pass });
    Ok(vec![result("experiment", params, seed, payload)])
}

fn sparsity(a: &SparsityArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let c = load(&a.circuit)?;
    let profile = sparsity_profile(&c, &a.eps_grid, &cfg)?;
    let monotone = profile.windows(2).all(|w| w[0].eps > w[1].eps || w[0].t >= w[1].t);
    let params = json!({ "circuit": a.circuit.display().to_string(), "eps_grid": a.eps_grid });
    let metrics: Vec<Value> = profile
        .iter()
        .map(|p| json!({ "name": format!("t_eps_{}", p.eps), "value": p.t, "bound": null, "pass": null }))
        .collect();
    let payload = json!({
        "experiment": "sparsity",
        "metrics": metrics,
        "profile": to_value(&profile),
        "pass": monotone,
    });
    Ok(vec![result("experiment", params, seed, payload)])
}

fn distinguish(a: &DistinguishArgs, seed: u64, cfg: OracleConfig) -> Result<Vec<Value>> {
    let c = load(&a.circuit)?;
    let d = exact_distribution(&c, &cfg)?;
    let bob = match a.bob {
        BobKind::Exact => BobMode::Exact,
        BobKind::Scheduled => BobMode::Scheduled,
        BobKind::Corrupted => BobMode::Corrupted { l1: a.l1 },
    };
    let r = run_hypothesis_test(&d, bob, a.delta, a.trials, a.rounds, seed)?;
    let (bound, pass) = match bob {
        BobMode::Corrupted { .. } => (r.analytic, None),
        _ => {
            let limit = 0.5 + a.delta;
            (Some(limit), Some(r.p_correct <= limit + 3.0 * r.sigma))
        }
    };
    let params = json!({
        "circuit": a.circuit.display().to_string(),
        "bob": to_value(&bob),
        "delta": a.delta,
        "trials": a.trials,
        "rounds": a.rounds,
    });
    let payload = json!({
        "experiment": "distinguish",
        "metrics": [{ "name": "p_correct", "value": r.p_correct, "bound": bound, "pass": pass }],
        "report": to_value(&r),
        "pass": pass,
    });
    Ok(vec![result("experiment", params, seed, payload)])
}

fn run_selftest(a: &SelftestArgs, seed: u64) -> Result<Vec<Value>> {
    let opts = SelftestOptions {
        inject_corrupted_bob: a.inject_corrupted_bob,
    };
    let r = selftest(seed, opts)?;
    let params = json!({ "inject_corrupted_bob": a.inject_corrupted_bob });
    Ok(vec![result("selftest", params, seed, to_value(&r))])
}
