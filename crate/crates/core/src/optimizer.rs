//! Gradient-descent minimization of `E(θ) = ⟨0|U†(θ) H U(θ)|0⟩`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::ansatz::AnsatzCircuit;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::statevector::{self, apply_gate_signed, expectation_pauli_sum, run_gates, StateVector};

/// How [`minimize`] obtains gradients. Both give the exact analytic gradient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMethod {
    /// Two shifted circuit evaluations per parameter.
    ParameterShift,
    /// One forward and one backward pass over the circuit.
    #[default]
    Adjoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    /// Stop once `|E_t − E_{t−1}|` drops below this (Hartree).
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub gradient: GradientMethod,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.4,
            tolerance: 1e-6,
            max_iterations: 5000,
            seed: 0,
            gradient: GradientMethod::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Invalid("learning rate must be positive".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::Invalid("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VqeResult {
    pub final_energy: f64,
    pub final_params: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    /// Energy at the starting point followed by one entry per update.
    pub energy_trace: Vec<f64>,
}

fn check(circuit: &AnsatzCircuit, h: &PauliSum, params: &[f64]) -> Result<()> {
    if params.len() != circuit.num_params() {
        return Err(Error::ParamCount {
            expected: circuit.num_params(),
            got: params.len(),
        });
    }
    if h.num_qubits() != circuit.num_qubits() {
        return Err(Error::QubitCountMismatch {
            operator: h.num_qubits(),
            state: circuit.num_qubits(),
        });
    }
    Ok(())
}

/// `|ψ(θ)⟩ = U(θ)|0…0⟩`
pub fn prepare_state(circuit: &AnsatzCircuit, params: &[f64]) -> Result<StateVector> {
    run_gates(circuit.num_qubits(), circuit.gates(), params)
}

pub fn cost(circuit: &AnsatzCircuit, h: &PauliSum, params: &[f64]) -> Result<f64> {
    check(circuit, h, params)?;
    expectation_pauli_sum(&prepare_state(circuit, params)?, h)
}

/// Parameter-shift gradient: `∂ⱼE = ½[E(θ + π/2 eⱼ) − E(θ − π/2 eⱼ)]`.
pub fn gradient(circuit: &AnsatzCircuit, h: &PauliSum, params: &[f64]) -> Result<Vec<f64>> {
    check(circuit, h, params)?;
    let mut shifted = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for j in 0..params.len() {
        shifted[j] = params[j] + FRAC_PI_2;
        let plus = cost(circuit, h, &shifted)?;
        shifted[j] = params[j] - FRAC_PI_2;
        let minus = cost(circuit, h, &shifted)?;
        shifted[j] = params[j];
        grad.push(0.5 * (plus - minus));
    }
    Ok(grad)
}

/// Energy and gradient in one forward and one backward sweep.
///
/// With `λ = U_{k+1}†…U_L† H|ψ⟩` and `μ` the state right after gate `k`,
/// `∂E/∂θ_k = Im⟨λ|G_k|μ⟩` for `U_k = exp(−iθ_k G_k / 2)`.
pub fn energy_and_gradient(
    circuit: &AnsatzCircuit,
    h: &PauliSum,
    params: &[f64],
) -> Result<(f64, Vec<f64>)> {
    check(circuit, h, params)?;
    let mut psi = prepare_state(circuit, params)?;
    let hpsi = statevector::apply_pauli_sum(&psi, h)?;
    let energy = statevector::inner(psi.amplitudes(), &hpsi).re;

    let mut lambda = hpsi;
    let mut grad = vec![0.0; params.len()];
    let mut scratch = vec![Complex64::new(0.0, 0.0); lambda.len()];
    for gate in circuit.gates().iter().rev() {
        if let (Some(slot), Some(generator)) = (gate.param_slot(), gate.kind().generator()) {
            scratch.copy_from_slice(psi.amplitudes());
            apply_pauli_in_place(&mut scratch, gate.qubits()[0], generator);
            grad[slot] = statevector::inner(&lambda, &scratch).im;
        }
        apply_gate_signed(psi.amplitudes_mut(), gate, params, -1.0);
        apply_gate_signed(&mut lambda, gate, params, -1.0);
    }
    Ok((energy, grad))
}

fn apply_pauli_in_place(amps: &mut [Complex64], q: usize, p: Pauli) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let j = i | bit;
        let (a, b) = (amps[i], amps[j]);
        match p {
            Pauli::I => {}
            Pauli::X => {
                amps[i] = b;
                amps[j] = a;
            }
            Pauli::Y => {
                amps[i] = Complex64::new(b.im, -b.re);
                amps[j] = Complex64::new(-a.im, a.re);
            }
            Pauli::Z => amps[j] = -b,
        }
    }
}

/// Uniform `[0, 2π)` starting angles from `seed`.
pub fn initial_params(num_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_params).map(|_| rng.gen_range(0.0..TAU)).collect()
}

/// Gradient descent from a seeded uniform start.
pub fn minimize(
    circuit: &AnsatzCircuit,
    h: &PauliSum,
    config: &OptimizerConfig,
) -> Result<VqeResult> {
    let start = initial_params(circuit.num_params(), config.seed);
    minimize_from(circuit, h, config, start)
}

/// Gradient descent `θ ← θ − η∇E` from `start`.
pub fn minimize_from(
    circuit: &AnsatzCircuit,
    h: &PauliSum,
    config: &OptimizerConfig,
    start: Vec<f64>,
) -> Result<VqeResult> {
    config.validate()?;
    check(circuit, h, &start)?;

    let eval = |p: &[f64]| -> Result<(f64, Vec<f64>)> {
        match config.gradient {
            GradientMethod::Adjoint => energy_and_gradient(circuit, h, p),
            GradientMethod::ParameterShift => Ok((cost(circuit, h, p)?, gradient(circuit, h, p)?)),
        }
    };

    let mut params = start;
    let (mut energy, mut grad) = eval(&params)?;
    let mut trace = vec![energy];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= config.learning_rate * g;
        }
        let (next, next_grad) = eval(&params)?;
        iterations += 1;
        trace.push(next);
        let change = (next - energy).abs();
        energy = next;
        grad = next_grad;
        if change < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok(VqeResult {
        final_energy: energy,
        final_params: params,
        iterations_used: iterations,
        converged,
        energy_trace: trace,
    })
}
