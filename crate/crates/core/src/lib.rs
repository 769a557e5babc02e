//! Born-rule probability estimation for restricted quantum circuit families,
//! converters from estimators to approximate samplers, and empirical harnesses
//! that check the estimators and samplers against a brute-force oracle.
//!
//! The crate is organised bottom-up:
//!
//! * [`stabcore`]: signed Paulis, Clifford tableaus, uniform Clifford sampling.
//! * [`circuits`]: the three circuit families, outcome patterns and the text format.
//! * [`oracle`]: dense statevector ground truth.
//! * [`polybox`]: additive-precision estimators with Hoeffding scheduling.
//! * [`samplers`]: sparse, CDF-inversion and conditional-chain samplers.
//! * [`experiments`]: anti-concentration, sparsity and distinguishability harnesses.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
mod error;
pub mod experiments;
pub mod oracle;
pub mod polybox;
pub mod rng;
pub mod samplers;
pub mod stabcore;
pub mod stats;

pub use circuits::{BinaryMatrix, Circuit, EncodedCircuit, IqpCircuit, Outcome, OutcomePattern, ProdCircuit, Trit};
pub use stabcore::Gate;
pub use error::{Error, Result};
pub use oracle::{ExactDistribution, OracleConfig, StateVector};
pub use polybox::{Estimate, PolyBox};
pub use rng::StreamRng;
pub use stabcore::{CliffordTableau, PauliOperator, ProductState};
