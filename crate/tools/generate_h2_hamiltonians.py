#!/usr/bin/env python3
"""Generate the bundled H2 / STO-3G / parity-mapped Pauli-sum coefficient file.

Run once; the output is committed under crates/core/data/. Requires pyscf and numpy.

    python3 tools/generate_h2_hamiltonians.py > crates/core/data/h2_sto3g_parity.ham
    python3 tools/generate_h2_hamiltonians.py 0.8 > crates/core/data/h2_sto3g_parity_0p8.ham

Conventions:
  * spin orbitals in block order (all alpha, then all beta), mode j -> qubit j
  * parity encoding: qubit j stores n_0 xor ... xor n_j
  * Pauli words are written with character i acting on qubit i
  * nuclear repulsion is folded into the IIII coefficient
"""
import itertools
import sys

import numpy as np
import pyscf
from pyscf import ao2mo, gto, scf

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_qubits(ops):
    # ops[i] acts on qubit i, qubit 0 is the least significant bit of the index
    m = np.array([[1.0 + 0j]])
    for op in ops:
        m = np.kron(op, m)
    return m


def annihilator(j, n):
    lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |1> -> |0>
    ops = [Z] * j + [lower] + [I2] * (n - j - 1)
    return kron_qubits(ops)


def fock_hamiltonian(h1, eri, enuc):
    norb = h1.shape[0]
    nso = 2 * norb
    dim = 2**nso
    a = [annihilator(j, nso) for j in range(nso)]
    ad = [m.conj().T for m in a]

    def spatial(p):
        return p % norb, p // norb

    h = enuc * np.eye(dim, dtype=complex)
    for p in range(nso):
        for q in range(nso):
            (i, si), (j, sj) = spatial(p), spatial(q)
            if si == sj and abs(h1[i, j]) > 0:
                h += h1[i, j] * ad[p] @ a[q]
    # 1/2 sum (pq|rs) a+_p a+_r a_s a_q
    for p, q, r, s in itertools.product(range(nso), repeat=4):
        (i, sp), (j, sq), (k, sr), (l, ss) = map(spatial, (p, q, r, s))
        if sp != sq or sr != ss:
            continue
        v = eri[i, j, k, l]
        if abs(v) < 1e-14:
            continue
        h += 0.5 * v * ad[p] @ ad[r] @ a[s] @ a[q]
    return h


def parity_transform(h_occ, nso):
    dim = 2**nso
    perm = np.zeros((dim, dim))
    for idx in range(dim):
        occ = [(idx >> j) & 1 for j in range(nso)]
        par = 0
        acc = 0
        for j in range(nso):
            acc ^= occ[j]
            par |= acc << j
        perm[par, idx] = 1.0
    return perm @ h_occ @ perm.T


def pauli_decompose(h, nq):
    terms = []
    for word in itertools.product("IXYZ", repeat=nq):
        m = kron_qubits([PAULI[c] for c in word])
        c = np.trace(m @ h) / 2**nq
        assert abs(c.imag) < 1e-12
        if abs(c.real) > 1e-12:
            terms.append(("".join(word), c.real))
    return terms


def terms_identity(terms):
    return sum(c for w, c in terms if set(w) == {"I"})


def main():
    if len(sys.argv) > 1:
        bonds = [float(b) for b in sys.argv[1:]]
    else:
        bonds = [round(0.3 + 0.2 * i, 1) for i in range(10)]
    print(
        "# molecule=H2 basis=sto3g mapping=parity qubits=4 includes_nuclear_repulsion=true "
        f"source=pyscf {pyscf.__version__} RHF integrals, block spin-orbital order, "
        "full Fock space, Pauli word char i acts on qubit i"
    )
    for bond in bonds:
        mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="sto-3g", unit="Angstrom", verbose=0)
        mf = scf.RHF(mol).run()
        c = mf.mo_coeff
        h1 = c.T @ mf.get_hcore() @ c
        eri = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])
        h_occ = fock_hamiltonian(h1, eri, mol.energy_nuc())
        h_par = parity_transform(h_occ, 4)
        terms = pauli_decompose(h_par, 4)
        evals = np.linalg.eigvalsh(h_par)
        no_id = np.linalg.eigvalsh(h_par - terms_identity(terms) * np.eye(16))
        sys.stderr.write(
            f"bond {bond}: ground {evals[0]:.12f} norm {np.abs(evals).max():.12f} "
            f"norm_without_identity {np.abs(no_id).max():.12f}\n"
        )
        print()
        print(f"bond {bond}")
        for word, coeff in terms:
            print(f"{word} {float(coeff):.17g}")


if __name__ == "__main__":
    main()
