"""Uniform sampling, composition, and inversion over the 1- and 2-qubit
Clifford groups, with export to Pauli transfer matrices.

A gate is stored as a binary symplectic tableau plus sign bits: row k of the
tableau is the Pauli string (up to sign) that the k-th generator maps to
under conjugation, and the k-th phase bit records its sign.  Bit layout is
interleaved per qubit, (x0, z0, x1, z1, ...), with generators ordered
(X0, Z0, X1, Z1, ...).  Conjugation by a Clifford is a signed permutation of
the 4**n Hermitian Pauli operators, which is also how gates act during
propagation; the dense transfer matrix is only materialized on demand.

Uniform sampling walks a bijection between [0, |Sp(2n, 2)|) and symplectic
matrices built from symplectic transvections, then draws sign bits
independently, so every group element (modulo global phase, which has no
observable effect on channels) is produced with exactly equal probability.
The full symplectic table for n in {1, 2} (6 and 720 matrices) is cached,
making a sample a table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "CliffordGate",
    "GateSequence",
    "clifford_group_order",
    "compose",
    "enumerate_group",
    "gate_from_index",
    "generator_gates",
    "identity_gate",
    "index_action",
    "inverse",
    "sample_uniform",
    "sequence_inverse",
    "symplectic_group_order",
    "to_ptm",
]

from .liouville import PauliTransferMatrix, ShapeMismatchError

_SUPPORTED = (1, 2)

# digit values I=0, X=1, Y=2, Z=3 from (x, z) bits
_XZ_TO_DIGIT = np.array([[0, 3], [1, 2]], dtype=np.int64)
_DIGIT_TO_XZ = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=np.uint8)


def _check_n(n_qubits: int) -> None:
    if n_qubits not in _SUPPORTED:
        raise ValueError(f"unsupported qubit count {n_qubits}; supported: {_SUPPORTED}")


@lru_cache(maxsize=None)
def _pauli_bits(n: int) -> np.ndarray:
    """Interleaved (x0, z0, ...) bits for each Pauli index, shape (4**n, 2n)."""
    dim = 4**n
    out = np.zeros((dim, 2 * n), dtype=np.uint8)
    for idx in range(dim):
        for k in range(n):
            digit = (idx >> (2 * (n - 1 - k))) & 3
            out[idx, 2 * k : 2 * k + 2] = _DIGIT_TO_XZ[digit]
    out.setflags(write=False)
    return out


def _bits_to_index(v: np.ndarray, n: int) -> int:
    idx = 0
    for k in range(n):
        digit = int(_XZ_TO_DIGIT[v[2 * k], v[2 * k + 1]])
        idx += digit << (2 * (n - 1 - k))
    return idx


def _xz_phase(v: np.ndarray, n: int) -> int:
    """Phase exponent of the Hermitian Pauli P_v = i^e X^x Z^z (e = sum x_j z_j)."""
    return int(sum(int(v[2 * k]) & int(v[2 * k + 1]) for k in range(n)))


# ---------------------------------------------------------------------------
# symplectic group over GF(2), interleaved convention
# ---------------------------------------------------------------------------


def symplectic_group_order(n: int) -> int:
    """|Sp(2n, 2)| = 2**(n^2) * prod_j (4**j - 1)."""
    order = 1
    for j in range(1, n + 1):
        order *= (1 << (2 * j)) - 1
    return order << (n * n)


def clifford_group_order(n: int) -> int:
    """Distinct n-qubit Clifford superoperators: |Sp(2n, 2)| * 4**n."""
    return symplectic_group_order(n) * 4**n


def _sympl_inner(v: np.ndarray, w: np.ndarray) -> int:
    t = 0
    for i in range(0, len(v), 2):
        t += int(v[i]) * int(w[i + 1]) + int(w[i]) * int(v[i + 1])
    return t % 2


def _transvect(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (v + _sympl_inner(k, v) * k) % 2


def _int_bits(i: int, width: int) -> np.ndarray:
    return np.array([(i >> j) & 1 for j in range(width)], dtype=np.uint8)


def _find_transvections(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Two vectors h0, h1 (possibly zero) with y = Z_h0 Z_h1 x."""
    nn = len(x)
    out = np.zeros((2, nn), dtype=np.uint8)
    if np.array_equal(x, y):
        return out
    if _sympl_inner(x, y) == 1:
        out[0] = (x + y) % 2
        return out
    z = np.zeros(nn, dtype=np.uint8)
    for i in range(0, nn, 2):
        if (x[i] or x[i + 1]) and (y[i] or y[i + 1]):
            z[i] = (x[i] + y[i]) % 2
            z[i + 1] = (x[i + 1] + y[i + 1]) % 2
            if z[i] == 0 and z[i + 1] == 0:
                z[i + 1] = 1
                if x[i] != x[i + 1]:
                    z[i] = 1
            out[0] = (x + z) % 2
            out[1] = (y + z) % 2
            return out
    for i in range(0, nn, 2):
        if (x[i] or x[i + 1]) and not (y[i] or y[i + 1]):
            if x[i] == x[i + 1]:
                z[i + 1] = 1
            else:
                z[i + 1] = x[i]
                z[i] = x[i + 1]
            break
    for i in range(0, nn, 2):
        if not (x[i] or x[i + 1]) and (y[i] or y[i + 1]):
            if y[i] == y[i + 1]:
                z[i + 1] = 1
            else:
                z[i + 1] = y[i]
                z[i] = y[i + 1]
            break
    out[0] = (x + z) % 2
    out[1] = (y + z) % 2
    return out


def _symplectic_from_index(i: int, n: int) -> np.ndarray:
    """The i-th symplectic matrix, a bijection on [0, |Sp(2n, 2)|)."""
    nn = 2 * n
    s = (1 << nn) - 1
    k = (i % s) + 1
    i //= s
    f1 = _int_bits(k, nn)
    e1 = np.zeros(nn, dtype=np.uint8)
    e1[0] = 1
    t = _find_transvections(e1, f1)
    bits = _int_bits(i % (1 << (nn - 1)), nn - 1)
    eprime = e1.copy()
    for j in range(2, nn):
        eprime[j] = bits[j - 1]
    h0 = _transvect(t[0], eprime)
    h0 = _transvect(t[1], h0)
    if bits[0] == 1:
        f1 = f1 * 0  # skip the final transvection
    if n != 1:
        g = np.zeros((nn, nn), dtype=np.uint8)
        g[:2, :2] = np.eye(2, dtype=np.uint8)
        g[2:, 2:] = _symplectic_from_index(i >> (nn - 1), n - 1)
    else:
        g = np.eye(2, dtype=np.uint8)
    for j in range(nn):
        g[j] = _transvect(t[0], g[j])
        g[j] = _transvect(t[1], g[j])
        g[j] = _transvect(h0, g[j])
        g[j] = _transvect(f1, g[j])
    return g


def _symplectic_form(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for k in range(n):
        j[2 * k, 2 * k + 1] = 1
        j[2 * k + 1, 2 * k] = 1
    return j


def _is_symplectic(tableau: np.ndarray, n: int) -> bool:
    j = _symplectic_form(n)
    return np.array_equal((tableau @ j @ tableau.T) % 2, j)


# ---------------------------------------------------------------------------
# conjugation: tableau + phases -> signed permutation of Pauli indices
# ---------------------------------------------------------------------------


def _conjugation_tables(tableau: np.ndarray, phases: np.ndarray, n: int):
    """Signed permutation of the Hermitian Pauli basis under conjugation.

    Images of arbitrary Paulis are products of the generator images; the
    phase bookkeeping tracks powers of i through X/Z reordering and checks
    that every image is again a signed Hermitian Pauli.
    """
    dim = 4**n
    bits = _pauli_bits(n)
    perm = np.zeros(dim, dtype=np.int64)
    sign = np.zeros(dim, dtype=np.int8)
    for idx in range(dim):
        v = bits[idx]
        eps = _xz_phase(v, n)
        acc = np.zeros(2 * n, dtype=np.uint8)
        for slot in range(2 * n):
            # slot 2k holds the X_k generator, slot 2k+1 the Z_k generator;
            # v[slot] is that generator's exponent in P_v
            if not v[slot]:
                continue
            row = tableau[slot]
            eps += 2 * int(phases[slot]) + _xz_phase(row, n)
            # (X^a Z^b)(X^c Z^d) = (-1)^{b.c} X^{a+c} Z^{b+d}
            eps += 2 * sum(int(acc[2 * t + 1]) & int(row[2 * t]) for t in range(n))
            acc = (acc + row) % 2
        out_idx = _bits_to_index(acc, n)
        rel = (eps - _xz_phase(acc, n)) % 4
        if rel not in (0, 2):
            raise AssertionError("conjugation image is not a Hermitian Pauli")
        perm[idx] = out_idx
        sign[idx] = 1 if rel == 0 else -1
    return perm, sign


@lru_cache(maxsize=None)
def _group_tables(n: int):
    """Per symplectic index: permutation and zero-phase signs of all Paulis."""
    order = symplectic_group_order(n)
    dim = 4**n
    perms = np.zeros((order, dim), dtype=np.int64)
    signs = np.zeros((order, dim), dtype=np.int8)
    tableaus = np.zeros((order, 2 * n, 2 * n), dtype=np.uint8)
    zero = np.zeros(2 * n, dtype=np.uint8)
    for i in range(order):
        tab = _symplectic_from_index(i, n)
        tableaus[i] = tab
        perms[i], signs[i] = _conjugation_tables(tab, zero, n)
    for a in (perms, signs, tableaus):
        a.setflags(write=False)
    return tableaus, perms, signs


@lru_cache(maxsize=None)
def _phase_sign_table(n: int) -> np.ndarray:
    """(-1)**(r . v) for each phase pattern r and Pauli bit vector v."""
    dim = 4**n
    bits = _pauli_bits(n).astype(np.int64)
    patterns = np.array(
        [[(p >> j) & 1 for j in range(2 * n)] for p in range(dim)], dtype=np.int64
    )
    table = 1 - 2 * ((patterns @ bits.T) % 2)
    table = table.astype(np.int8)
    table.setflags(write=False)
    return table


# ---------------------------------------------------------------------------
# gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CliffordGate:
    """An n-qubit Clifford element (modulo global phase).

    Immutable; the signed permutation is derived eagerly, the dense transfer
    matrix lazily (idempotent cache fill, safe under concurrent access).
    """

    n_qubits: int
    tableau: np.ndarray = field(repr=False)
    phases: np.ndarray = field(repr=False)
    perm: np.ndarray = field(repr=False, init=False)
    sign: np.ndarray = field(repr=False, init=False)

    def __post_init__(self) -> None:
        _check_n(self.n_qubits)
        tab = np.array(self.tableau, dtype=np.uint8) % 2
        ph = np.array(self.phases, dtype=np.uint8) % 2
        nn = 2 * self.n_qubits
        if tab.shape != (nn, nn) or ph.shape != (nn,):
            raise ShapeMismatchError("tableau/phase shapes do not match qubit count")
        if not _is_symplectic(tab, self.n_qubits):
            raise ValueError("tableau does not preserve the symplectic form")
        tab.setflags(write=False)
        ph.setflags(write=False)
        perm, sign = _conjugation_tables(tab, ph, self.n_qubits)
        perm.setflags(write=False)
        sign.setflags(write=False)
        object.__setattr__(self, "tableau", tab)
        object.__setattr__(self, "phases", ph)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "sign", sign)

    def key(self) -> bytes:
        return self.tableau.tobytes() + self.phases.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffordGate):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.key()))

    def to_ptm(self) -> PauliTransferMatrix:
        cached = self.__dict__.get("_ptm")
        if cached is None:
            dim = 4**self.n_qubits
            entries = np.zeros((dim, dim))
            entries[self.perm, np.arange(dim)] = self.sign
            cached = PauliTransferMatrix(self.n_qubits, entries)
            self.__dict__["_ptm"] = cached
        return cached


def _gate_from_action(n: int, perm: np.ndarray, sign: np.ndarray) -> CliffordGate:
    """Rebuild tableau + phases from a signed permutation (generator images)."""
    bits = _pauli_bits(n)
    tableau = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    phases = np.zeros(2 * n, dtype=np.uint8)
    for k in range(n):
        for slot, digit in ((2 * k, 1), (2 * k + 1, 3)):
            gen_idx = digit << (2 * (n - 1 - k))
            tableau[slot] = bits[perm[gen_idx]]
            phases[slot] = 0 if sign[gen_idx] == 1 else 1
    return CliffordGate(n, tableau, phases)


def identity_gate(n_qubits: int) -> CliffordGate:
    _check_n(n_qubits)
    nn = 2 * n_qubits
    return CliffordGate(n_qubits, np.eye(nn, dtype=np.uint8), np.zeros(nn, dtype=np.uint8))


def gate_from_index(n_qubits: int, index: int) -> CliffordGate:
    """Deterministic bijection [0, clifford_group_order(n)) -> gates."""
    _check_n(n_qubits)
    order = clifford_group_order(n_qubits)
    if not 0 <= index < order:
        raise ValueError(f"gate index {index} outside [0, {order})")
    n_symp = symplectic_group_order(n_qubits)
    tableaus, _, _ = _group_tables(n_qubits)
    phase_bits = _int_bits(index // n_symp, 2 * n_qubits)
    return CliffordGate(n_qubits, tableaus[index % n_symp], phase_bits)


def sample_uniform(n_qubits: int, rng: np.random.Generator) -> CliffordGate:
    """Draw a gate exactly uniformly (one integer draw from the stream)."""
    _check_n(n_qubits)
    return gate_from_index(n_qubits, int(rng.integers(clifford_group_order(n_qubits))))


def index_action(n_qubits: int, indices: np.ndarray):
    """Vectorized signed-permutation action for an array of gate indices.

    Returns (perms, signs) with shape (len(indices), 4**n); used by the
    batched propagation pipeline so sampled gates never need materializing.
    """
    _check_n(n_qubits)
    indices = np.asarray(indices, dtype=np.int64)
    n_symp = symplectic_group_order(n_qubits)
    _, perms, signs = _group_tables(n_qubits)
    phase_signs = _phase_sign_table(n_qubits)
    symp = indices % n_symp
    phase = indices // n_symp
    return perms[symp], signs[symp] * phase_signs[phase]


def compose(a: CliffordGate, b: CliffordGate) -> CliffordGate:
    """Gate a applied after gate b (matches transfer-matrix product A @ B)."""
    if a.n_qubits != b.n_qubits:
        raise ShapeMismatchError("gates act on different qubit counts")
    perm = a.perm[b.perm]
    sign = b.sign * a.sign[b.perm]
    return _gate_from_action(a.n_qubits, perm, sign)


def inverse(g: CliffordGate) -> CliffordGate:
    """Group inverse; compose(g, inverse(g)) is the identity gate."""
    perm = np.empty_like(g.perm)
    sign = np.empty_like(g.sign)
    perm[g.perm] = np.arange(len(g.perm))
    sign[g.perm] = g.sign
    return _gate_from_action(g.n_qubits, perm, sign)


def to_ptm(g: CliffordGate) -> PauliTransferMatrix:
    return g.to_ptm()


def sequence_inverse(gates) -> CliffordGate:
    """Inverse of the ordered product (first gate acts first)."""
    gates = list(gates)
    if not gates:
        raise ValueError("empty gate sequence")
    n = gates[0].n_qubits
    perm = np.arange(4**n)
    sign = np.ones(4**n, dtype=np.int8)
    for g in gates:
        if g.n_qubits != n:
            raise ShapeMismatchError("mixed qubit counts in sequence")
        perm, sign = g.perm[perm], sign * g.sign[perm]
    inv_perm = np.empty_like(perm)
    inv_sign = np.empty_like(sign)
    inv_perm[perm] = np.arange(len(perm))
    inv_sign[perm] = sign
    return _gate_from_action(n, inv_perm, inv_sign)


@dataclass(frozen=True)
class GateSequence:
    """A benchmarking sequence plus its global inverse gate."""

    n_qubits: int
    gates: tuple[CliffordGate, ...]
    inverse_gate: CliffordGate

    def __post_init__(self) -> None:
        total = self.inverse_gate
        check = sequence_inverse(self.gates)
        if check != total:
            raise ValueError("inverse_gate does not invert the sequence")

    @classmethod
    def sample(cls, n_qubits: int, length: int, rng: np.random.Generator) -> "GateSequence":
        if length < 1:
            raise ValueError("sequence length must be >= 1")
        gates = tuple(sample_uniform(n_qubits, rng) for _ in range(length))
        return cls(n_qubits, gates, sequence_inverse(gates))

    def __len__(self) -> int:
        return len(self.gates)


def generator_gates(n_qubits: int) -> dict[str, CliffordGate]:
    """A standard generating set (Hadamards, phase gates, CNOT for n=2)."""
    _check_n(n_qubits)
    h = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    s = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    if n_qubits == 1:
        return {
            "H": CliffordGate(1, h, np.zeros(2, dtype=np.uint8)),
            "S": CliffordGate(1, s, np.zeros(2, dtype=np.uint8)),
        }
    def embed(block: np.ndarray, qubit: int) -> CliffordGate:
        tab = np.eye(4, dtype=np.uint8)
        o = 2 * qubit
        tab[o : o + 2, o : o + 2] = block
        return CliffordGate(2, tab, np.zeros(4, dtype=np.uint8))
    cnot = np.array(
        [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 1]], dtype=np.uint8
    )
    return {
        "H0": embed(h, 0),
        "H1": embed(h, 1),
        "S0": embed(s, 0),
        "S1": embed(s, 1),
        "CX01": CliffordGate(2, cnot, np.zeros(4, dtype=np.uint8)),
    }


def enumerate_group(n_qubits: int) -> list[CliffordGate]:
    """Close the generating set under composition; the exact group.

    Sizes: 24 for one qubit, 11520 for two.  Used as the uniformity oracle
    against the index-based sampler.
    """
    gens = list(generator_gates(n_qubits).values())
    start = identity_gate(n_qubits)
    seen = {start.key(): start}
    queue = [start]
    while queue:
        current = queue.pop()
        for g in gens:
            nxt = compose(g, current)
            if nxt.key() not in seen:
                seen[nxt.key()] = nxt
                queue.append(nxt)
    return sorted(seen.values(), key=lambda g: g.key())
