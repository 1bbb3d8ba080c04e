//! Shared fixtures for the criterion benchmarks.

use vqe_lab::hamiltonian::bundled_h2_grid;
use vqe_lab::optimizer::initial_params;
use vqe_lab::{build_circuit, AnsatzCircuit, PauliSum};

/// A template circuit, the H₂ Hamiltonian at 0.7 Å and seeded parameters.
pub fn h2_fixture(template: u8, depth: usize) -> (AnsatzCircuit, PauliSum, Vec<f64>) {
    let circuit = build_circuit(template, depth).expect("valid template");
    let h = bundled_h2_grid()
        .get(0.7)
        .cloned()
        .expect("0.7 Å on the grid");
    let params = initial_params(circuit.num_params(), 11);
    (circuit, h, params)
}
