//! Dense-matrix oracles built from Kronecker products, independent of the
//! simulator's bit-twiddling kernels.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqe_lab::{Gate, GateKind, PauliSum};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mat2(a: [[Complex64; 2]; 2]) -> CMat {
    CMat::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

pub fn pauli_matrix(p: char) -> CMat {
    match p {
        'I' => mat2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]),
        'X' => mat2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]),
        'Y' => mat2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]),
        'Z' => mat2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]),
        _ => panic!("bad pauli {p}"),
    }
}

/// `exp(−iθP/2) = cos(θ/2) I − i sin(θ/2) P`
fn rotation(p: char, theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    pauli_matrix('I') * c(co, 0.0) - pauli_matrix(p) * c(0.0, s)
}

fn single(kind: GateKind, theta: f64) -> CMat {
    match kind {
        GateKind::RX => rotation('X', theta),
        GateKind::RY => rotation('Y', theta),
        GateKind::RZ => rotation('Z', theta),
        GateKind::X => pauli_matrix('X'),
        GateKind::H => {
            (pauli_matrix('X') + pauli_matrix('Z')) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
        }
        _ => unreachable!(),
    }
}

/// `ops[q]` acts on qubit `q`; qubit 0 is the least significant index bit,
/// so it sits rightmost in the Kronecker product.
pub fn kron_qubits(ops: &[CMat]) -> CMat {
    let mut m = CMat::from_element(1, 1, c(1.0, 0.0));
    for op in ops {
        m = op.kronecker(&m);
    }
    m
}

fn projector(bit: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(bit, bit)] = c(1.0, 0.0);
    m
}

/// Full `2^n × 2^n` unitary of one gate.
pub fn gate_matrix(gate: &Gate, n: usize, params: &[f64]) -> CMat {
    let id = || pauli_matrix('I');
    match gate.kind() {
        GateKind::CNOT | GateKind::CZ => {
            let (a, b) = (gate.qubits()[0], gate.qubits()[1]);
            let target_op = if gate.kind() == GateKind::CNOT {
                pauli_matrix('X')
            } else {
                pauli_matrix('Z')
            };
            // |0⟩⟨0|_a ⊗ I + |1⟩⟨1|_a ⊗ U_b
            let mut off: Vec<CMat> = (0..n).map(|_| id()).collect();
            off[a] = projector(0);
            let mut on: Vec<CMat> = (0..n).map(|_| id()).collect();
            on[a] = projector(1);
            on[b] = target_op;
            kron_qubits(&off) + kron_qubits(&on)
        }
        kind => {
            let theta = gate.param_slot().map_or(0.0, |s| params[s]);
            let mut ops: Vec<CMat> = (0..n).map(|_| id()).collect();
            ops[gate.qubits()[0]] = single(kind, theta);
            kron_qubits(&ops)
        }
    }
}

pub fn circuit_unitary(gates: &[Gate], n: usize, params: &[f64]) -> CMat {
    let dim = 1 << n;
    gates.iter().fold(CMat::identity(dim, dim), |u, g| {
        gate_matrix(g, n, params) * u
    })
}

pub fn zero_state(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[0] = c(1.0, 0.0);
    v
}

pub fn pauli_sum_matrix(h: &PauliSum) -> CMat {
    let n = h.num_qubits();
    let dim = 1 << n;
    let mut m = CMat::zeros(dim, dim);
    for t in h.terms() {
        let word = t.string.to_string();
        let ops: Vec<CMat> = word.chars().map(pauli_matrix).collect();
        m += kron_qubits(&ops) * c(t.coefficient, 0.0);
    }
    m
}

/// `⟨ψ|M|ψ⟩` as a complex number.
pub fn sandwich(m: &CMat, psi: &CVec) -> Complex64 {
    (psi.adjoint() * m * psi)[(0, 0)]
}

pub fn random_state(n: usize, r: &mut impl Rng) -> CVec {
    let v = CVec::from_fn(1 << n, |_, _| {
        c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    });
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// Random gate over all kinds; rotations take consecutive slots.
pub fn random_gate(n: usize, next_slot: &mut usize, r: &mut impl Rng) -> Gate {
    let kinds = if n >= 2 { 7 } else { 5 };
    let q = r.gen_range(0..n);
    let mut rot = |k| {
        let g = Gate::new(k, vec![q], Some(*next_slot)).unwrap();
        *next_slot += 1;
        g
    };
    match r.gen_range(0..kinds) {
        0 => rot(GateKind::RX),
        1 => rot(GateKind::RY),
        2 => rot(GateKind::RZ),
        3 => Gate::h(q),
        4 => Gate::x(q),
        k => {
            let other = (q + r.gen_range(1..n)) % n;
            if k == 5 {
                Gate::cnot(q, other).unwrap()
            } else {
                Gate::cz(q, other).unwrap()
            }
        }
    }
}

pub fn random_pauli_sum(n: usize, terms: usize, r: &mut impl Rng) -> PauliSum {
    let letters = ['I', 'X', 'Y', 'Z'];
    let words: Vec<(String, f64)> = (0..terms)
        .map(|_| {
            let w: String = (0..n).map(|_| letters[r.gen_range(0..4)]).collect();
            (w, r.gen_range(-2.0..2.0))
        })
        .collect();
    PauliSum::from_pairs(words.iter().map(|(w, x)| (w.as_str(), *x))).unwrap()
}

pub fn to_cvec(amps: &[Complex64]) -> CVec {
    CVec::from_column_slice(amps)
}

/// Central finite difference of `f` in every coordinate.
pub fn finite_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|j| {
            p[j] = x[j] + step;
            let plus = f(&p);
            p[j] = x[j] - step;
            let minus = f(&p);
            p[j] = x[j];
            (plus - minus) / (2.0 * step)
        })
        .collect()
}

/// Eigenvalues of a Hermitian matrix from nalgebra, ascending.
pub fn reference_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
