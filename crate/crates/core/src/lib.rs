//! Statevector VQE laboratory for small molecules.
//!
//! * [`statevector`]: dense simulation and Pauli expectation values
//! * [`hamiltonian`]: Pauli-sum files, exact diagonalization, operator norms
//! * [`ansatz`]: four hardware-efficient templates and their trainable-gate counts
//! * [`optimizer`]: parameter-shift / adjoint gradients and gradient descent
//! * [`expressibility`]: lower and upper covering-number bounds
//! * [`harness`]: bond scans, depth sweeps and result export

pub mod ansatz;
pub mod error;
pub mod expressibility;
pub mod hamiltonian;
pub mod harness;
pub mod optimizer;
pub mod pauli;
pub mod statevector;

pub use ansatz::{build_circuit, count_trainable, AnsatzCircuit, AnsatzTemplate};
pub use error::{Error, Result};
pub use expressibility::{
    average_expressibility, best_expressive_range, covering_log_bounds, min_trainable_gates,
    BoundInputs, CoveringBounds, ExpressiveRangeReport,
};
pub use hamiltonian::{
    ground_energy_exact, load_hamiltonians, operator_norm, to_dense, MolecularHamiltonianSet,
};
pub use harness::{run_depth_sweep, run_single_trial, DepthSweepRecord, SweepConfig};
pub use optimizer::{cost, gradient, minimize, OptimizerConfig, VqeResult};
pub use pauli::{Pauli, PauliString, PauliSum, PauliTerm};
pub use statevector::{
    apply_gate, expectation_pauli_string, expectation_pauli_sum, Gate, GateKind, StateVector,
};
