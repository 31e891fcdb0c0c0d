"""Real-valued Liouville (Pauli transfer matrix) representation.

States, measurement effects, and channels are expanded over the normalized
Pauli basis {P / sqrt(d) : P in {I,X,Y,Z}^n}, ordered lexicographically with
the identity string first (so index 0 is I.../sqrt(d)).  In this basis a
Hermiticity-preserving map is a real matrix, a state is a real vector whose
first coefficient is 1/sqrt(d), and Born probabilities are plain inner
products.  Complex arithmetic appears only while converting Kraus operators
or unitaries into transfer matrices; everything downstream is real.

Tolerances: construction checks use 1e-10, propagation identities 1e-12,
probability range slack 1e-9 (double precision over dimension <= 16).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "CompletenessError",
    "EffectVec",
    "KrausSet",
    "NonUnitaryError",
    "PauliTransferMatrix",
    "ProbabilityBoundError",
    "ShapeMismatchError",
    "StateVec",
    "apply",
    "avg_fidelity",
    "compose",
    "expectation",
    "pauli_labels",
    "ptm_from_kraus",
    "ptm_from_unitary",
    "quality_parameter",
    "zeros_effect",
    "zeros_state",
]

CONSTRUCTION_TOL = 1e-10
PROPAGATION_TOL = 1e-12
PROBABILITY_SLACK = 1e-9

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
_LETTERS = "IXYZ"


class ShapeMismatchError(ValueError):
    """Operands have incompatible qubit counts or array shapes."""


class CompletenessError(ValueError):
    """Kraus operators do not sum to a trace-preserving channel."""


class NonUnitaryError(ValueError):
    """Matrix fails the unitarity check."""


class ProbabilityBoundError(ValueError):
    """A Born probability fell outside [0, 1] beyond the allowed slack."""


def pauli_labels(n_qubits: int) -> list[str]:
    """Pauli-string labels in basis order, e.g. ['II', 'IX', ...] for n=2."""
    labels = [""]
    for _ in range(n_qubits):
        labels = [s + c for s in labels for c in _LETTERS]
    return labels


@lru_cache(maxsize=None)
def _normalized_paulis(n_qubits: int) -> np.ndarray:
    """Stack of the 4**n normalized Pauli matrices, shape (4**n, d, d)."""
    d = 2**n_qubits
    mats = []
    for label in pauli_labels(n_qubits):
        m = np.array([[1.0 + 0.0j]])
        for c in label:
            m = np.kron(m, _PAULI_1Q[c])
        mats.append(m / np.sqrt(d))
    out = np.stack(mats)
    out.setflags(write=False)
    return out


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PauliTransferMatrix:
    """A channel as a real matrix over the normalized Pauli basis.

    Invariants checked at construction: row 0 equals (1, 0, ..., 0) within
    1e-12 (trace preservation) and every entry lies in [-1, 1] with 1e-9
    slack (a necessary CPTP condition).  Instances are immutable.
    """

    n_qubits: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        dim = 4**self.n_qubits
        entries = _freeze(self.entries)
        if entries.shape != (dim, dim):
            raise ShapeMismatchError(
                f"expected {(dim, dim)} transfer matrix, got {entries.shape}"
            )
        unit_row = np.zeros(dim)
        unit_row[0] = 1.0
        if np.max(np.abs(entries[0] - unit_row)) > PROPAGATION_TOL:
            raise CompletenessError("row 0 deviates from (1, 0, ..., 0): not trace preserving")
        if np.max(np.abs(entries)) > 1.0 + PROBABILITY_SLACK:
            raise ValueError("transfer-matrix entry outside [-1, 1]: not a CPTP channel")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return 4**self.n_qubits

    @property
    def d(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class StateVec:
    """A density operator as a real coefficient vector (unit trace)."""

    n_qubits: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coeffs = _freeze(self.coefficients)
        dim = 4**self.n_qubits
        if coeffs.shape != (dim,):
            raise ShapeMismatchError(f"expected length-{dim} state vector, got {coeffs.shape}")
        if abs(coeffs[0] - 1.0 / np.sqrt(2**self.n_qubits)) > PROPAGATION_TOL:
            raise ValueError("coefficient 0 must equal 1/sqrt(d): state is not unit trace")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_density_matrix(cls, rho: np.ndarray) -> "StateVec":
        rho = np.asarray(rho, dtype=complex)
        n = int(round(np.log2(rho.shape[0])))
        basis = _normalized_paulis(n)
        coeffs = np.einsum("kab,ba->k", basis, rho)
        if np.max(np.abs(coeffs.imag)) > PROPAGATION_TOL:
            raise ValueError("density matrix is not Hermitian")
        return cls(n, coeffs.real)

    def to_density_matrix(self) -> np.ndarray:
        basis = _normalized_paulis(self.n_qubits)
        return np.einsum("k,kab->ab", self.coefficients, basis)


@dataclass(frozen=True)
class EffectVec:
    """A POVM effect (0 <= Q <= I) as a real coefficient vector."""

    n_qubits: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coeffs = _freeze(self.coefficients)
        dim = 4**self.n_qubits
        if coeffs.shape != (dim,):
            raise ShapeMismatchError(f"expected length-{dim} effect vector, got {coeffs.shape}")
        object.__setattr__(self, "coefficients", coeffs)
        # 0 <= Q <= I guarantees every Born probability lands in [0, 1]
        eigvals = np.linalg.eigvalsh(self.to_matrix())
        if eigvals.min() < -PROBABILITY_SLACK or eigvals.max() > 1.0 + PROBABILITY_SLACK:
            raise ValueError("effect eigenvalues outside [0, 1]: not a valid POVM element")

    @classmethod
    def from_matrix(cls, q: np.ndarray) -> "EffectVec":
        q = np.asarray(q, dtype=complex)
        n = int(round(np.log2(q.shape[0])))
        basis = _normalized_paulis(n)
        coeffs = np.einsum("kab,ba->k", basis, q)
        if np.max(np.abs(coeffs.imag)) > PROPAGATION_TOL:
            raise ValueError("effect matrix is not Hermitian")
        return cls(n, coeffs.real)

    def to_matrix(self) -> np.ndarray:
        basis = _normalized_paulis(self.n_qubits)
        return np.einsum("k,kab->ab", self.coefficients, basis)

    def trace(self) -> float:
        """Tr(Q), read off the identity coefficient."""
        return float(self.coefficients[0] * np.sqrt(2**self.n_qubits))


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of a channel; completeness is checked on build."""

    n_qubits: int
    operators: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        d = 2**self.n_qubits
        ops = []
        for k in self.operators:
            k = np.asarray(k, dtype=complex)
            if k.shape != (d, d):
                raise ShapeMismatchError(f"Kraus operator shape {k.shape}, expected {(d, d)}")
            k.setflags(write=False)
            ops.append(k)
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(d))) > CONSTRUCTION_TOL:
            raise CompletenessError("sum K^dag K deviates from identity")
        object.__setattr__(self, "operators", tuple(ops))


def zeros_state(n_qubits: int) -> StateVec:
    """|0...0><0...0| as a StateVec."""
    d = 2**n_qubits
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    return StateVec.from_density_matrix(rho)


def zeros_effect(n_qubits: int) -> EffectVec:
    """Projector onto |0...0> as an EffectVec."""
    d = 2**n_qubits
    q = np.zeros((d, d), dtype=complex)
    q[0, 0] = 1.0
    return EffectVec.from_matrix(q)


def ptm_from_kraus(kraus: KrausSet) -> PauliTransferMatrix:
    """Transfer matrix with entries sum_K Tr(sigma_i K sigma_j K^dag).

    The imaginary residue of each entry must vanish to 1e-12 (Kraus maps are
    Hermiticity preserving); it is checked and discarded.
    """
    basis = _normalized_paulis(kraus.n_qubits)
    dim = 4**kraus.n_qubits
    entries = np.zeros((dim, dim), dtype=complex)
    for k in kraus.operators:
        moved = np.einsum("ab,jbc,dc->jad", k, basis, k.conj())
        entries += np.einsum("iab,jba->ij", basis, moved)
    if np.max(np.abs(entries.imag)) > PROPAGATION_TOL:
        raise ValueError("transfer matrix has a nonreal residue; input is not a Kraus set")
    return PauliTransferMatrix(kraus.n_qubits, entries.real)


def ptm_from_unitary(u: np.ndarray) -> PauliTransferMatrix:
    """Transfer matrix of conjugation by a unitary; result is orthogonal."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    n = int(round(np.log2(d)))
    if u.shape != (d, d) or 2**n != d:
        raise ShapeMismatchError(f"expected a 2^n x 2^n matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > CONSTRUCTION_TOL:
        raise NonUnitaryError("u^dag u deviates from identity")
    ptm = ptm_from_kraus(KrausSet(n, (u,)))
    gram = ptm.entries.T @ ptm.entries
    if np.max(np.abs(gram - np.eye(ptm.dim))) > CONSTRUCTION_TOL:
        raise NonUnitaryError("unitary channel produced a non-orthogonal transfer matrix")
    return ptm


def apply(m: PauliTransferMatrix, s: StateVec) -> StateVec:
    """Act with the channel on a state (matrix-vector product)."""
    if m.n_qubits != s.n_qubits:
        raise ShapeMismatchError("channel and state act on different qubit counts")
    return StateVec(s.n_qubits, m.entries @ s.coefficients)


def compose(a: PauliTransferMatrix, b: PauliTransferMatrix) -> PauliTransferMatrix:
    """Channel a applied after channel b; the matrix product A @ B."""
    if a.n_qubits != b.n_qubits:
        raise ShapeMismatchError("channels act on different qubit counts")
    return PauliTransferMatrix(a.n_qubits, a.entries @ b.entries)


def expectation(q: EffectVec, s: StateVec) -> float:
    """Born probability Tr(Q rho) as an inner product, clamped to [0, 1].

    Values outside [0, 1] by more than 1e-9 signal a non-physical pairing
    and raise ProbabilityBoundError.
    """
    if q.n_qubits != s.n_qubits:
        raise ShapeMismatchError("effect and state act on different qubit counts")
    value = float(q.coefficients @ s.coefficients)
    if value < -PROBABILITY_SLACK or value > 1.0 + PROBABILITY_SLACK:
        raise ProbabilityBoundError(f"probability {value!r} outside [0, 1] beyond slack")
    return min(max(value, 0.0), 1.0)


def quality_parameter(m: PauliTransferMatrix) -> float:
    """Depolarizing parameter of the group-twirled channel.

    Twirling over any unitary 2-design turns a channel into a depolarizing
    channel; its parameter depends only on the trace of the transfer matrix,
    f = (Tr M - 1) / (d^2 - 1).  For the depolarizing channel itself this
    returns the defining parameter, and for CPTP inputs the value lies in
    [-1/(d^2 - 1), 1].
    """
    dsq = float(m.dim)
    return (float(np.trace(m.entries)) - 1.0) / (dsq - 1.0)


def avg_fidelity(f: float, n_qubits: int) -> float:
    """Average gate fidelity from the quality parameter: f + (1 - f)/d."""
    d = 2**n_qubits
    return f + (1.0 - f) / d
