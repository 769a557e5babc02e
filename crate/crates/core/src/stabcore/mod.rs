//! Exact Pauli and Clifford group arithmetic.

mod gate;
mod pauli;
mod product;
mod random;
mod tableau;

pub use gate::Gate;
pub use pauli::PauliOperator;
pub use product::{bloch_from_gate_word, product_expectation, ProductState};
pub use random::{random_clifford, MAX_RANDOM_CLIFFORD_QUBITS};
pub use tableau::{conjugate_pauli, CliffordTableau};

