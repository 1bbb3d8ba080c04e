//! Dense statevector simulation.
//!
//! Qubit 0 is the least significant bit of the amplitude index. Rotations follow
//! `R_P(θ) = exp(−iθP/2)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Computational basis state with the given index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        if index >= 1 << num_qubits {
            return Err(Error::Invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes, normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Invalid(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_size(num_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Invalid("state has zero or non-finite norm".into()));
        }
        Ok(Self {
            num_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(num_qubits));
    }
    Ok(())
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    H,
    X,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::CZ => "CZ",
            GateKind::H => "H",
            GateKind::X => "X",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    /// Pauli generator of a rotation gate.
    pub fn generator(self) -> Option<Pauli> {
        match self {
            GateKind::RX => Some(Pauli::X),
            GateKind::RY => Some(Pauli::Y),
            GateKind::RZ => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate on one or two qubits. For `CNOT` the first qubit is the control.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    param_slot: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, param_slot: Option<usize>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::GateArity {
                kind: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::RepeatedQubit {
                kind: kind.name(),
                qubit: qubits[0],
            });
        }
        match (kind.is_rotation(), param_slot) {
            (true, None) => return Err(Error::MissingParamSlot { kind: kind.name() }),
            (false, Some(_)) => return Err(Error::UnexpectedParamSlot { kind: kind.name() }),
            _ => {}
        }
        Ok(Self {
            kind,
            qubits,
            param_slot,
        })
    }

    pub fn rx(q: usize, slot: usize) -> Self {
        Self::new(GateKind::RX, vec![q], Some(slot)).expect("valid RX")
    }

    pub fn ry(q: usize, slot: usize) -> Self {
        Self::new(GateKind::RY, vec![q], Some(slot)).expect("valid RY")
    }

    pub fn rz(q: usize, slot: usize) -> Self {
        Self::new(GateKind::RZ, vec![q], Some(slot)).expect("valid RZ")
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::CNOT, vec![control, target], None)
    }

    pub fn cz(a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::CZ, vec![a, b], None)
    }

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![q], None).expect("valid H")
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, vec![q], None).expect("valid X")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn param_slot(&self) -> Option<usize> {
        self.param_slot
    }

    /// Checks the gate against a register size and parameter vector length.
    pub fn validate(&self, num_qubits: usize, num_params: usize) -> Result<()> {
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
        if let Some(slot) = self.param_slot {
            if slot >= num_params {
                return Err(Error::MissingParameter {
                    slot,
                    len: num_params,
                });
            }
        }
        Ok(())
    }

    /// Angle for this gate, zero for fixed gates.
    fn angle(&self, params: &[f64]) -> f64 {
        self.param_slot.map_or(0.0, |s| params[s])
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        if let Some(s) = self.param_slot {
            write!(f, " [{s}]")?;
        }
        Ok(())
    }
}

/// 2×2 unitary of a single-qubit gate, row-major.
pub fn single_qubit_matrix(kind: GateKind, theta: f64) -> Option<[[Complex64; 2]; 2]> {
    let (s, c) = (theta / 2.0).sin_cos();
    let m = match kind {
        GateKind::RX => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ],
        GateKind::RY => [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ],
        GateKind::RZ => [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]],
        GateKind::H => {
            let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[r, r], [r, -r]]
        }
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::CNOT | GateKind::CZ => return None,
    };
    Some(m)
}

fn apply_1q(amps: &mut [Complex64], q: usize, m: &[[Complex64; 2]; 2]) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let j = i | bit;
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[j] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Applies `gate` in place with angle sign `sign` (−1 applies the inverse).
/// The gate must already be validated.
pub(crate) fn apply_gate_signed(amps: &mut [Complex64], gate: &Gate, params: &[f64], sign: f64) {
    match gate.kind {
        GateKind::CNOT => {
            let (c, t) = (1usize << gate.qubits[0], 1usize << gate.qubits[1]);
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        GateKind::CZ => {
            let mask = (1usize << gate.qubits[0]) | (1usize << gate.qubits[1]);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *a = -*a;
                }
            }
        }
        kind => {
            let m = single_qubit_matrix(kind, sign * gate.angle(params))
                .expect("single-qubit gate has a matrix");
            apply_1q(amps, gate.qubits[0], &m);
        }
    }
}

/// Returns the state after `gate`, leaving the input untouched.
pub fn apply_gate(state: &StateVector, gate: &Gate, params: &[f64]) -> Result<StateVector> {
    gate.validate(state.num_qubits, params.len())?;
    let mut out = state.clone();
    apply_gate_signed(&mut out.amplitudes, gate, params, 1.0);
    Ok(out)
}

/// Applies `gate` to `state` in place.
pub fn apply_gate_mut(state: &mut StateVector, gate: &Gate, params: &[f64]) -> Result<()> {
    gate.validate(state.num_qubits, params.len())?;
    apply_gate_signed(&mut state.amplitudes, gate, params, 1.0);
    Ok(())
}

/// Applies the inverse of `gate` in place.
pub fn apply_gate_inverse_mut(state: &mut StateVector, gate: &Gate, params: &[f64]) -> Result<()> {
    gate.validate(state.num_qubits, params.len())?;
    apply_gate_signed(&mut state.amplitudes, gate, params, -1.0);
    Ok(())
}

/// Runs `gates` in order on `|0…0⟩`.
pub fn run_gates(num_qubits: usize, gates: &[Gate], params: &[f64]) -> Result<StateVector> {
    let mut state = StateVector::zero(num_qubits)?;
    for g in gates {
        g.validate(num_qubits, params.len())?;
    }
    for g in gates {
        apply_gate_signed(&mut state.amplitudes, g, params, 1.0);
    }
    Ok(state)
}

/// Accumulates `coeff · P|ψ⟩` into `out`.
fn accumulate_pauli(amps: &[Complex64], p: &PauliString, coeff: f64, out: &mut [Complex64]) {
    let (x, z, ny) = p.masks();
    let phase = Complex64::i().powu(ny) * coeff;
    for (i, a) in amps.iter().enumerate() {
        let sign = if (i & z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        out[i ^ x] += phase * sign * a;
    }
}

fn pauli_expectation_unchecked(amps: &[Complex64], p: &PauliString) -> f64 {
    // ⟨ψ|P|ψ⟩ = Σᵢ conj(ψ[i⊕x]) · i^{ny} · (−1)^{|i∧z|} · ψ[i]
    let (x, z, ny) = p.masks();
    let mut acc = ZERO;
    for (i, a) in amps.iter().enumerate() {
        let t = amps[i ^ x].conj() * a;
        if (i & z).count_ones() % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    (Complex64::i().powu(ny) * acc).re
}

pub fn expectation_pauli_string(state: &StateVector, pauli: &PauliString) -> Result<f64> {
    if pauli.num_qubits() != state.num_qubits {
        return Err(Error::QubitCountMismatch {
            operator: pauli.num_qubits(),
            state: state.num_qubits,
        });
    }
    Ok(pauli_expectation_unchecked(&state.amplitudes, pauli))
}

/// Parses `word` and evaluates its expectation value.
pub fn expectation_pauli_word(state: &StateVector, word: &str) -> Result<f64> {
    expectation_pauli_string(state, &word.parse()?)
}

/// `Σᵢ cᵢ ⟨ψ|Pᵢ|ψ⟩`
pub fn expectation_pauli_sum(state: &StateVector, h: &PauliSum) -> Result<f64> {
    check_operator(state, h)?;
    Ok(h.terms()
        .iter()
        .map(|t| t.coefficient * pauli_expectation_unchecked(&state.amplitudes, &t.string))
        .sum())
}

/// `H|ψ⟩` as a raw (unnormalized) amplitude vector.
pub fn apply_pauli_sum(state: &StateVector, h: &PauliSum) -> Result<Vec<Complex64>> {
    check_operator(state, h)?;
    let mut out = vec![ZERO; state.amplitudes.len()];
    for t in h.terms() {
        accumulate_pauli(&state.amplitudes, &t.string, t.coefficient, &mut out);
    }
    Ok(out)
}

fn check_operator(state: &StateVector, h: &PauliSum) -> Result<()> {
    if h.num_qubits() != state.num_qubits {
        return Err(Error::QubitCountMismatch {
            operator: h.num_qubits(),
            state: state.num_qubits,
        });
    }
    Ok(())
}
