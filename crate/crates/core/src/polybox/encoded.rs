use std::sync::OnceLock;

use super::{Estimate, PolyBox};
use crate::circuits::{EncodedCircuit, OutcomePattern};
use crate::oracle::{encoded_first_bit, encoded_probability_from, OracleConfig};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Deterministic estimate for the parity-encoded family.
///
/// Any pattern with a wildcard has probability exactly `2^{-k}` (`k` fixed
/// positions), because a free tail bit makes the parity uniform. A full
/// pattern has probability `2^{-n} Pr(X = z_0 ⊕ Par(z'))`, which is guessed
/// as `2^{-(n+1)}` unless `eps < 2^{-n}`, in which case it is computed.
pub fn ce_estimate(c: &EncodedCircuit, pattern: &OutcomePattern, eps: f64, cfg: &OracleConfig) -> Result<Estimate> {
    ce_estimate_with(c, pattern, eps, || encoded_first_bit(c, cfg))
}

fn ce_estimate_with<F>(c: &EncodedCircuit, pattern: &OutcomePattern, eps: f64, first_bit: F) -> Result<Estimate>
where
    F: FnOnce() -> Result<f64>,
{
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    pattern.check_len(c.measured())?;
    let n = c.tail_len();
    let value = if pattern.has_wildcard() {
        2f64.powi(-(pattern.fixed_count() as i32))
    } else if eps < 2f64.powi(-(n as i32)) {
        encoded_probability_from(c, pattern, first_bit()?)?
    } else {
        2f64.powi(-(n as i32 + 1))
    };
    Ok(Estimate {
        value,
        eps,
        delta: 0.0,
        samples_used: 1,
    })
}

#[derive(Clone, Debug)]
pub struct EncodedPolyBox {
    circuit: EncodedCircuit,
    cfg: OracleConfig,
    // inner oracle run, done at most once
    first_bit: OnceLock<f64>,
}

impl EncodedPolyBox {
    pub fn new(circuit: EncodedCircuit, cfg: OracleConfig) -> Self {
        EncodedPolyBox {
            circuit,
            cfg,
            first_bit: OnceLock::new(),
        }
    }
}

impl PolyBox for EncodedPolyBox {
    fn measured(&self) -> usize {
        self.circuit.measured()
    }

    fn estimate(&self, pattern: &OutcomePattern, eps: f64, _delta: f64, _rng: &mut StreamRng) -> Result<Estimate> {
        ce_estimate_with(&self.circuit, pattern, eps, || {
            if let Some(&p) = self.first_bit.get() {
                return Ok(p);
            }
            let p = encoded_first_bit(&self.circuit, &self.cfg)?;
            Ok(*self.first_bit.get_or_init(|| p))
        })
    }
}
