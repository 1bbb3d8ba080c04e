//! Pauli-sum Hamiltonians: file ingestion, dense materialization, exact
//! diagonalization and the operator norm.

mod dense;
mod eigen;
mod io;

pub use dense::{to_dense, DenseMatrix};
pub use eigen::{
    eigen_spectrum, eigenvalues, EigenDecomposition, HERMITIAN_TOLERANCE, MAX_SWEEPS,
    OFF_DIAGONAL_THRESHOLD,
};
pub use io::{format_hamiltonians, load_hamiltonians, parse_hamiltonians};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Bond lengths closer than this are treated as the same grid point.
pub const BOND_MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonianMetadata {
    pub molecule: String,
    pub basis: String,
    pub mapping: String,
    pub num_qubits: usize,
    pub includes_nuclear_repulsion: bool,
    pub source: String,
}

/// One Pauli sum per bond length, sorted by bond length.
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularHamiltonianSet {
    metadata: HamiltonianMetadata,
    entries: Vec<(f64, PauliSum)>,
}

impl MolecularHamiltonianSet {
    pub fn new(metadata: HamiltonianMetadata, mut entries: Vec<(f64, PauliSum)>) -> Result<Self> {
        for (bond, h) in &entries {
            if !(bond.is_finite() && *bond > 0.0) {
                return Err(Error::Invalid(format!(
                    "bond length {bond} is not positive"
                )));
            }
            if h.num_qubits() != metadata.num_qubits {
                return Err(Error::Invalid(format!(
                    "bond {bond}: {} qubits, expected {}",
                    h.num_qubits(),
                    metadata.num_qubits
                )));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        if entries
            .windows(2)
            .any(|w| w[1].0 - w[0].0 < BOND_MATCH_TOLERANCE)
        {
            return Err(Error::Invalid("bond lengths are not unique".into()));
        }
        Ok(Self { metadata, entries })
    }

    pub fn metadata(&self) -> &HamiltonianMetadata {
        &self.metadata
    }

    pub fn num_qubits(&self) -> usize {
        self.metadata.num_qubits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(f64, PauliSum)] {
        &self.entries
    }

    pub fn bonds(&self) -> Vec<f64> {
        self.entries.iter().map(|(b, _)| *b).collect()
    }

    pub fn get(&self, bond: f64) -> Option<&PauliSum> {
        self.entries
            .iter()
            .find(|(b, _)| (b - bond).abs() < BOND_MATCH_TOLERANCE)
            .map(|(_, h)| h)
    }

    pub fn require(&self, bond: f64) -> Result<&PauliSum> {
        self.get(bond).ok_or(Error::MissingBond(bond))
    }
}

/// Smallest eigenvalue of the dense Hamiltonian.
pub fn ground_energy_exact(h: &PauliSum) -> Result<f64> {
    let values = eigenvalues(&to_dense(h)?)?;
    Ok(values[0])
}

/// `‖A‖ = √μ₁(A A†)`, the square root of the largest eigenvalue of `A A†`.
pub fn operator_norm(h: &PauliSum) -> Result<f64> {
    let a = to_dense(h)?;
    let gram = a.matmul(&a.adjoint());
    let values = eigenvalues(&gram)?;
    let top = values.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

/// `max |λ|` over the spectrum, which equals the operator norm for
/// Hermitian input.
pub fn spectral_radius(h: &PauliSum) -> Result<f64> {
    let values = eigenvalues(&to_dense(h)?)?;
    Ok(values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Exact energy and norms at one bond length.
#[derive(Clone, Debug, Serialize)]
pub struct ExactSummary {
    pub bond: f64,
    pub ground_energy: f64,
    pub operator_norm: f64,
    pub operator_norm_without_identity: f64,
}

pub fn exact_summary(set: &MolecularHamiltonianSet) -> Result<Vec<ExactSummary>> {
    set.entries()
        .iter()
        .map(|(bond, h)| {
            Ok(ExactSummary {
                bond: *bond,
                ground_energy: ground_energy_exact(h)?,
                operator_norm: operator_norm(h)?,
                operator_norm_without_identity: operator_norm(&h.without_identity())?,
            })
        })
        .collect()
}

/// The bundled H₂ grid (0.3–2.1 Å in steps of 0.2), parity mapped on 4 qubits.
pub const BUNDLED_H2_GRID: &str = include_str!("../../data/h2_sto3g_parity.ham");
/// The bundled H₂ Hamiltonian at 0.8 Å.
pub const BUNDLED_H2_0P8: &str = include_str!("../../data/h2_sto3g_parity_0p8.ham");

pub fn bundled_h2_grid() -> MolecularHamiltonianSet {
    parse_hamiltonians(BUNDLED_H2_GRID, "h2_sto3g_parity.ham").expect("bundled data parses")
}

pub fn bundled_h2_equilibrium() -> PauliSum {
    parse_hamiltonians(BUNDLED_H2_0P8, "h2_sto3g_parity_0p8.ham")
        .expect("bundled data parses")
        .get(0.8)
        .cloned()
        .expect("bundled file holds 0.8 Å")
}
