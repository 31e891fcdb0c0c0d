"""Independent reference implementations used to derive expected values.

Everything here goes through dense complex linear algebra on density
matrices and vectorized superoperators, deliberately avoiding the real
Pauli-basis code paths under test.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_strings(n):
    labels = [""]
    for _ in range(n):
        labels = [s + c for s in labels for c in "IXYZ"]
    return labels


def normalized_pauli_stack(n):
    d = 2**n
    mats = []
    for label in pauli_strings(n):
        m = np.array([[1.0 + 0j]])
        for c in label:
            m = np.kron(m, PAULI_1Q[c])
        mats.append(m / np.sqrt(d))
    return np.stack(mats)


def kraus_superoperator(ops):
    """Column-stacking superoperator: vec(K rho K^dag) = (conj(K) kron K) vec(rho)."""
    d = ops[0].shape[0]
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in ops:
        s += np.kron(k.conj(), k)
    return s


def kraus_ptm_dense(ops):
    """Transfer matrix via the vectorized superoperator and a basis change."""
    d = ops[0].shape[0]
    n = int(round(np.log2(d)))
    basis = normalized_pauli_stack(n)
    p = np.column_stack([m.reshape(-1, order="F") for m in basis])
    m = p.conj().T @ kraus_superoperator(ops) @ p
    assert np.max(np.abs(m.imag)) < 1e-12
    return m.real


def unitary_ptm_dense(u):
    return kraus_ptm_dense([u])


def apply_kraus(ops, rho):
    out = np.zeros_like(rho, dtype=complex)
    for k in ops:
        out += k @ rho @ k.conj().T
    return out


def density_to_pauli_coeffs(rho):
    n = int(round(np.log2(rho.shape[0])))
    basis = normalized_pauli_stack(n)
    coeffs = np.einsum("kab,ba->k", basis, rho)
    assert np.max(np.abs(coeffs.imag)) < 1e-12
    return coeffs.real


def haar_state(d, rng):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def haar_average_fidelity(ops, n, samples, rng):
    """Monte Carlo estimate of the average gate fidelity of a Kraus channel."""
    d = 2**n
    total = 0.0
    for _ in range(samples):
        v = haar_state(d, rng)
        rho = np.outer(v, v.conj())
        total += float(np.real(v.conj() @ apply_kraus(ops, rho) @ v))
    return total / samples


def swap_exponential(n, i, j, beta):
    """expm oracle for exp(i beta SWAP_ij) on n qubits."""
    d = 2**n
    swap = np.zeros((d, d), dtype=complex)
    for basis in range(d):
        bi = (basis >> (n - 1 - i)) & 1
        bj = (basis >> (n - 1 - j)) & 1
        swapped = basis & ~((1 << (n - 1 - i)) | (1 << (n - 1 - j)))
        swapped |= bj << (n - 1 - i)
        swapped |= bi << (n - 1 - j)
        swap[swapped, basis] = 1.0
    return expm(1j * beta * swap)


def random_kraus_set(n, n_ops, rng):
    """Random CPTP channel: Gaussian blocks normalized to completeness."""
    d = 2**n
    blocks = rng.normal(size=(n_ops, d, d)) + 1j * rng.normal(size=(n_ops, d, d))
    gram = sum(b.conj().T @ b for b in blocks)
    vals, vecs = np.linalg.eigh(gram)
    inv_sqrt = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
    return [b @ inv_sqrt for b in blocks]
