use rand::Rng;

use super::{check_eps_delta, hoeffding_samples, mean_of, Estimate, PolyBox};
use crate::circuits::{OutcomePattern, ProdCircuit, Trit};
use crate::rng::StreamRng;
use crate::stabcore::PauliOperator;
use crate::Result;

/// Estimator for product-input Clifford circuits.
///
/// The projector onto a fixed outcome `s` of qubit `i` is `(I + (-1)^s Z_i)/2`,
/// so `P(S)` is the average over random subsets `A` of the fixed positions of
/// `tr(ρ U† ∏_{i∈A} (-1)^{s_i} Z_i U)`. Each term is a product-state Pauli
/// expectation once `U† Z_i U` is known.
#[derive(Clone, Debug)]
pub struct ProdPolyBox {
    circuit: ProdCircuit,
    // U† Z_i U for each measured qubit
    images: Vec<PauliOperator>,
}

impl ProdPolyBox {
    pub fn new(circuit: ProdCircuit) -> Self {
        let inv = circuit.tableau().inverse();
        let images = (0..circuit.measured()).map(|i| inv.z_image(i).clone()).collect();
        ProdPolyBox { circuit, images }
    }

    pub fn circuit(&self) -> &ProdCircuit {
        &self.circuit
    }

    /// One unbiased draw in `[-1, 1]` whose mean is `P(S)`.
    pub fn single_sample(&self, pattern: &OutcomePattern, rng: &mut StreamRng) -> Result<f64> {
        pattern.check_len(self.circuit.measured())?;
        let mut acc = PauliOperator::identity(self.circuit.num_qubits());
        self.draw(pattern, &mut acc, rng)
    }

    fn draw(&self, pattern: &OutcomePattern, acc: &mut PauliOperator, rng: &mut StreamRng) -> Result<f64> {
        acc.clear();
        let mut sign = 1.0;
        for (i, t) in pattern.trits().iter().enumerate() {
            if *t == Trit::Wild || !rng.gen::<bool>() {
                continue;
            }
            // images of commuting Z's commute, so the phase is 0 or 2
            let phase = acc.mul_assign_phase(&self.images[i]);
            debug_assert!(phase.is_multiple_of(2));
            acc.set_negative(phase == 2);
            if *t == Trit::One {
                sign = -sign;
            }
        }
        Ok(sign * self.circuit.prep().expectation(acc)?)
    }
}

impl PolyBox for ProdPolyBox {
    fn measured(&self) -> usize {
        self.circuit.measured()
    }

    /// Mean of `ceil((2/eps²) ln(2/delta))` draws (range `[-1, 1]`).
    fn estimate(&self, pattern: &OutcomePattern, eps: f64, delta: f64, rng: &mut StreamRng) -> Result<Estimate> {
        check_eps_delta(eps, delta)?;
        pattern.check_len(self.circuit.measured())?;
        let s = hoeffding_samples(eps, delta, 2.0)?;
        let mut acc = PauliOperator::identity(self.circuit.num_qubits());
        let value = mean_of(s, || self.draw(pattern, &mut acc, rng))?;
        Ok(Estimate {
            value,
            eps,
            delta,
            samples_used: s,
        })
    }
}

pub fn prod_single_sample(c: &ProdCircuit, pattern: &OutcomePattern, rng: &mut StreamRng) -> Result<f64> {
    ProdPolyBox::new(c.clone()).single_sample(pattern, rng)
}

pub fn prod_estimate(
    c: &ProdCircuit,
    pattern: &OutcomePattern,
    eps: f64,
    delta: f64,
    rng: &mut StreamRng,
) -> Result<Estimate> {
    ProdPolyBox::new(c.clone()).estimate(pattern, eps, delta, rng)
}
