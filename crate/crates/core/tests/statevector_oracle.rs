mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use vqe_lab::statevector::{apply_pauli_sum, run_gates};
use vqe_lab::{
    expectation_pauli_string, expectation_pauli_sum, Gate, PauliString, PauliSum, StateVector,
};

fn max_diff(a: &CVec, b: &[num_complex::Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn random_three_qubit_circuit_matches_kronecker_oracle() {
    let mut r = rng(7);
    let mut slot = 0;
    let gates: Vec<Gate> = (0..12).map(|_| random_gate(3, &mut slot, &mut r)).collect();
    let params: Vec<f64> = (0..slot)
        .map(|_| r.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let got = run_gates(3, &gates, &params).unwrap();
    let want = circuit_unitary(&gates, 3, &params) * zero_state(3);
    assert!(max_diff(&want, got.amplitudes()) < 1e-10);
}

#[test]
fn qubit_zero_is_least_significant() {
    let s = run_gates(3, &[Gate::x(0)], &[]).unwrap();
    assert!((s.amplitudes()[1].re - 1.0).abs() < 1e-15);
    let s = run_gates(3, &[Gate::x(2)], &[]).unwrap();
    assert!((s.amplitudes()[4].re - 1.0).abs() < 1e-15);
}

#[test]
fn cnot_direction() {
    let s = run_gates(2, &[Gate::x(0), Gate::cnot(0, 1).unwrap()], &[]).unwrap();
    assert!((s.amplitudes()[3].re - 1.0).abs() < 1e-15);
    let s = run_gates(2, &[Gate::x(1), Gate::cnot(0, 1).unwrap()], &[]).unwrap();
    assert!((s.amplitudes()[2].re - 1.0).abs() < 1e-15);
}

#[test]
fn oracle_convention() {
    let x0 = circuit_unitary(&[Gate::x(0)], 2, &[]) * zero_state(2);
    assert!((x0[1].re - 1.0).abs() < 1e-15);
    let cx = circuit_unitary(&[Gate::x(0), Gate::cnot(0, 1).unwrap()], 2, &[]) * zero_state(2);
    assert!((cx[3].re - 1.0).abs() < 1e-15);
    let ry = circuit_unitary(&[Gate::ry(0, 0)], 1, &[1.0]) * zero_state(1);
    assert!((ry[1].re - 0.5f64.sin()).abs() < 1e-15);
}

#[test]
fn xy_string_on_random_two_qubit_state() {
    let mut r = rng(11);
    let psi = random_state(2, &mut r);
    let state = StateVector::from_amplitudes(psi.iter().copied().collect()).unwrap();
    let p: PauliString = "XY".parse().unwrap();
    let got = expectation_pauli_string(&state, &p).unwrap();
    let m = kron_qubits(&[pauli_matrix('X'), pauli_matrix('Y')]);
    let want = sandwich(&m, &psi);
    assert!(want.im.abs() < 1e-12);
    assert!((got - want.re).abs() < 1e-12);
}

#[test]
fn h2_expectation_on_random_state() {
    let h = vqe_lab::hamiltonian::bundled_h2_equilibrium();
    let mut r = rng(3);
    let psi = random_state(4, &mut r);
    let state = StateVector::from_amplitudes(psi.iter().copied().collect()).unwrap();
    let got = expectation_pauli_sum(&state, &h).unwrap();
    let want = sandwich(&pauli_sum_matrix(&h), &psi);
    assert!((got - want.re).abs() < 1e-12);
}

#[test]
fn pauli_sum_application_matches_matrix() {
    let mut r = rng(5);
    let h = random_pauli_sum(3, 6, &mut r);
    let psi = random_state(3, &mut r);
    let state = StateVector::from_amplitudes(psi.iter().copied().collect()).unwrap();
    let got = apply_pauli_sum(&state, &h).unwrap();
    let want = pauli_sum_matrix(&h) * &psi;
    assert!(max_diff(&want, &got) < 1e-12);
}

#[test]
fn mismatched_widths_are_rejected() {
    let s = StateVector::zero(2).unwrap();
    let h = PauliSum::from_pairs([("ZZZ", 1.0)]).unwrap();
    assert!(expectation_pauli_sum(&s, &h).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_circuits_match_oracle(seed in any::<u64>(), n in 1usize..=3, len in 0usize..=20) {
        let mut r = rng(seed);
        let mut slot = 0;
        let gates: Vec<Gate> = (0..len).map(|_| random_gate(n, &mut slot, &mut r)).collect();
        let params: Vec<f64> = (0..slot).map(|_| r.gen_range(-10.0..10.0)).collect();
        let got = run_gates(n, &gates, &params).unwrap();
        let want = circuit_unitary(&gates, n, &params) * zero_state(n);
        prop_assert!(max_diff(&want, got.amplitudes()) < 1e-10);
        prop_assert!((got.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_expectations_match_oracle(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..=8) {
        let mut r = rng(seed);
        let h = random_pauli_sum(n, terms, &mut r);
        let psi = random_state(n, &mut r);
        let state = StateVector::from_amplitudes(psi.iter().copied().collect()).unwrap();
        let got = expectation_pauli_sum(&state, &h).unwrap();
        let want = sandwich(&pauli_sum_matrix(&h), &psi);
        prop_assert!((got - want.re).abs() < 1e-12);
        prop_assert!(want.im.abs() < 1e-12);
    }
}
