//! Python bindings: circuits, estimators, samplers and the exact oracle.

// the pyo3 macros expand `?` on PyResult into an identity conversion
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use bornbox::circuits::{parse_circuit, parse_circuit_file, serialize_circuit};
use bornbox::experiments::{run_hypothesis_test, selftest, BobMode, SelftestOptions};
use bornbox::oracle::{exact_distribution, exact_probability, OracleConfig};
use bornbox::polybox::{hoeffding_samples, polybox_for, ExactPolyBox, PolyBox};
use bornbox::rng::stream;
use bornbox::samplers::{
    cdf_bitwise_sample, conditional_chain_sample, epsilon_plan, sparse_sample, CdfSamplerConfig, SparsityPolynomial,
};
use bornbox::stabcore::random_clifford;
use bornbox::{Error, Gate, OutcomePattern};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(m) => PyIOError::new_err(m),
        Error::OracleLimit { .. } | Error::EnumerationLimit { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn pattern(text: &str) -> PyResult<OutcomePattern> {
    text.parse().map_err(err)
}

fn oracle_config(max_qubits: Option<usize>) -> OracleConfig {
    match max_qubits {
        Some(max_qubits) => OracleConfig { max_qubits },
        None => OracleConfig::default(),
    }
}

/// A parsed circuit of family `prod`, `iqp` or `encoded`.
#[pyclass(name = "Circuit", module = "bornbox_py", frozen)]
#[derive(Clone)]
struct PyCircuit {
    inner: bornbox::Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Parses circuit text.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: parse_circuit(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: parse_circuit_file(path).map_err(err)?,
        })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family()
    }

    #[getter]
    fn measured(&self) -> usize {
        self.inner.measured()
    }

    fn to_text(&self) -> String {
        serialize_circuit(&self.inner)
    }

    /// Additive-error estimate of `Pr(pattern)` with the family's estimator.
    /// Returns `(value, samples_used)`.
    #[pyo3(signature = (pattern, eps=0.05, delta=0.01, seed=0))]
    fn estimate(&self, pattern: &str, eps: f64, delta: f64, seed: u64) -> PyResult<(f64, u64)> {
        let p = self::pattern(pattern)?;
        let b = polybox_for(&self.inner, OracleConfig::default()).map_err(err)?;
        let e = b.estimate(&p, eps, delta, &mut stream(seed, 0)).map_err(err)?;
        Ok((e.value, e.samples_used))
    }

    #[pyo3(signature = (pattern, max_qubits=None))]
    fn probability(&self, pattern: &str, max_qubits: Option<usize>) -> PyResult<f64> {
        exact_probability(&self.inner, &self::pattern(pattern)?, &oracle_config(max_qubits)).map_err(err)
    }

    /// Exact distribution as a list of `(outcome, probability)` with nonzero probability.
    #[pyo3(signature = (max_qubits=None))]
    fn distribution(&self, max_qubits: Option<usize>) -> PyResult<Vec<(String, f64)>> {
        let d = exact_distribution(&self.inner, &oracle_config(max_qubits)).map_err(err)?;
        Ok(d.support().map(|(o, p)| (o.to_string(), p)).collect())
    }

    /// `count` outcomes from the sparse, cdf or chain converter over the
    /// exact estimator. Sample `i` depends only on `(seed, i)`.
    #[pyo3(signature = (count, method="sparse", seed=0, eps=0.2, t=4, m=40))]
    fn sample(&self, count: usize, method: &str, seed: u64, eps: f64, t: usize, m: u32) -> PyResult<Vec<String>> {
        let est = ExactPolyBox::from_circuit(&self.inner, &OracleConfig::default()).map_err(err)?;
        let draw = |i: u64| -> bornbox::Result<String> {
            let mut rng = stream(seed, i);
            let o = match method {
                "sparse" => {
                    let (t, inner) = epsilon_plan(&SparsityPolynomial::constant(t), est.measured(), eps)?;
                    sparse_sample(&est, t, inner, inner, &mut rng)?.outcome
                }
                "cdf" => cdf_bitwise_sample(&est, &CdfSamplerConfig::new(m, 0.0, 0.0)?, &mut rng)?,
                "chain" => conditional_chain_sample(&est, 0.0, 0.0, &mut rng)?,
                other => return Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
            };
            Ok(o.to_string())
        };
        (0..count as u64).map(draw).collect::<bornbox::Result<_>>().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(family={}, measured={})", self.inner.family(), self.inner.measured())
    }
}

/// A Clifford as its Pauli images, built from gates like `("CNOT", [0, 1])`.
#[pyclass(name = "CliffordTableau", module = "bornbox_py", frozen)]
struct PyTableau {
    inner: bornbox::CliffordTableau,
}

#[pymethods]
impl PyTableau {
    #[new]
    #[pyo3(signature = (n, gates=Vec::new()))]
    fn new(n: usize, gates: Vec<(String, Vec<usize>)>) -> PyResult<Self> {
        let gates: Vec<Gate> = gates
            .iter()
            .map(|(name, qs)| Gate::from_name(name, qs))
            .collect::<bornbox::Result<_>>()
            .map_err(err)?;
        Ok(PyTableau {
            inner: bornbox::CliffordTableau::from_gates(n, &gates).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed=0))]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyTableau {
            inner: random_clifford(n, &mut stream(seed, 0)).map_err(err)?,
        })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    /// `U P U†` for a Pauli string such as `"-XZY"`.
    fn apply(&self, pauli: &str) -> PyResult<String> {
        let p: bornbox::PauliOperator = pauli.parse().map_err(err)?;
        Ok(self.inner.apply(&p).map_err(err)?.to_string())
    }

    fn inverse(&self) -> Self {
        PyTableau {
            inner: self.inner.inverse(),
        }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
#[pyo3(signature = (eps, delta, width=2.0))]
fn hoeffding(eps: f64, delta: f64, width: f64) -> PyResult<u64> {
    hoeffding_samples(eps, delta, width).map_err(err)
}

/// Referee success rate against Bob (`"exact"`, `"scheduled"` or `"corrupted"`).
#[pyfunction]
#[pyo3(signature = (circuit, bob="scheduled", l1=0.4, delta=0.05, trials=100_000, rounds=1, seed=0))]
fn distinguish(
    circuit: &PyCircuit,
    bob: &str,
    l1: f64,
    delta: f64,
    trials: u64,
    rounds: u64,
    seed: u64,
) -> PyResult<f64> {
    let mode = match bob {
        "exact" => BobMode::Exact,
        "scheduled" => BobMode::Scheduled,
        "corrupted" => BobMode::Corrupted { l1 },
        other => return Err(PyValueError::new_err(format!("unknown bob `{other}`"))),
    };
    let alice = exact_distribution(&circuit.inner, &OracleConfig::default()).map_err(err)?;
    let r = run_hypothesis_test(&alice, mode, delta, trials, rounds, seed).map_err(err)?;
    Ok(r.p_correct)
}

type Check = (String, bool, String);

/// Fast self-checks as `(all_pass, [(name, pass, detail)])`.
#[pyfunction(name = "selftest")]
#[pyo3(signature = (seed=0))]
fn run_selftest(seed: u64) -> PyResult<(bool, Vec<Check>)> {
    let r = selftest(seed, SelftestOptions::default()).map_err(err)?;
    Ok((r.pass, r.checks.into_iter().map(|c| (c.name, c.pass, c.detail)).collect()))
}

#[pymodule]
fn bornbox_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyTableau>()?;
    m.add_function(wrap_pyfunction!(hoeffding, m)?)?;
    m.add_function(wrap_pyfunction!(distinguish, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
