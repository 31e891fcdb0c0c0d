"""Constructors for the noise channels used throughout the simulator.

Every channel is specified declaratively (a NoiseSpec) and lowered to a
Pauli transfer matrix with :func:`build`.  Local channels are built on one
qubit and Kronecker-powered; unitary channels use closed forms for the
unitary, never a matrix exponential.

Composition order convention: in ``Composite(parts)`` and in the textual
``compose(a, b, ...)`` form, the FIRST listed channel acts FIRST.  The usual
"circle" notation reads right to left, so ``lp . la`` (phase damping after
amplitude damping) is ``Composite([amplitude_damping, phase_damping])`` and
prints as ``compose(amplitude_damping(p1), phase_damping(p2))``.

Textual grammar (used by config files and the CLI)::

    channel := "identity"
             | "depolarizing(" num ")"          # global, parameter p
             | "amplitude_damping(" num ")"     # per-qubit Kraus, parameter p
             | "phase_damping(" num ")"         # per-qubit Kraus, parameter p
             | "z_rotation(" num ")"            # per-qubit exp(i theta Z)
             | "swap_correlation(" beta_kw ("," beta_kw)* ")"
             | "compose(" channel ("," channel)+ ")"
    beta_kw := "beta_IJ=" num                   # 1-based qubit labels, I < J

Damping parameters follow the "keep" convention: p = 1 is the identity
channel, smaller p is stronger noise.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from . import liouville
from .liouville import KrausSet, PauliTransferMatrix

__all__ = [
    "Composite",
    "GlobalDepolarizing",
    "LocalAmplitudeDamping",
    "LocalPhaseDamping",
    "LocalZRotation",
    "NoiseSpec",
    "SwapCorrelation",
    "build",
    "fidelity_of",
    "format_noise",
    "parse_noise",
]


def _check_unit(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_angle(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= pi:
        raise ValueError(f"{name} must lie in [0, pi], got {value}")
    return value


@dataclass(frozen=True)
class GlobalDepolarizing:
    """rho -> p rho + (1 - p) I/d; transfer matrix diag(1, p, ..., p)."""

    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_unit(self.p, "p"))


@dataclass(frozen=True)
class LocalAmplitudeDamping:
    """Independent spontaneous decay on every qubit, keep parameter p."""

    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_unit(self.p, "p"))


@dataclass(frozen=True)
class LocalPhaseDamping:
    """Independent dephasing on every qubit, keep parameter p."""

    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_unit(self.p, "p"))


@dataclass(frozen=True)
class LocalZRotation:
    """Coherent over-rotation exp(i theta Z) on every qubit."""

    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _check_angle(self.theta, "theta"))


@dataclass(frozen=True)
class SwapCorrelation:
    """Pairwise exp(i beta_ij SWAP_ij) interactions; 0-based pairs i < j.

    Overlapping pairs are applied as channels in lexicographic (i, j) order,
    the first pair acting first (a fixed convention; with a single pair, the
    only case with two qubits, order is moot).
    """

    betas: tuple[tuple[int, int, float], ...]

    def __init__(self, betas) -> None:
        if isinstance(betas, dict):
            items = [(i, j, b) for (i, j), b in betas.items()]
        else:
            items = [(int(i), int(j), float(b)) for i, j, b in betas]
        if not items:
            raise ValueError("swap correlation needs at least one pair")
        seen = set()
        cleaned = []
        for i, j, b in sorted(items):
            if not 0 <= i < j:
                raise ValueError(f"invalid qubit pair ({i}, {j}); need 0 <= i < j")
            if (i, j) in seen:
                raise ValueError(f"duplicate pair ({i}, {j})")
            seen.add((i, j))
            cleaned.append((i, j, _check_angle(b, f"beta_{i}{j}")))
        object.__setattr__(self, "betas", tuple(cleaned))


@dataclass(frozen=True)
class Composite:
    """Ordered channel list; the first element acts first."""

    parts: tuple

    def __init__(self, parts) -> None:
        parts = tuple(parts)
        if not parts:
            raise ValueError("composite channel needs at least one part")
        for part in parts:
            if not isinstance(part, _SPEC_TYPES):
                raise TypeError(f"not a noise spec: {part!r}")
        object.__setattr__(self, "parts", parts)


NoiseSpec = (
    GlobalDepolarizing
    | LocalAmplitudeDamping
    | LocalPhaseDamping
    | LocalZRotation
    | SwapCorrelation
    | Composite
)
_SPEC_TYPES = (
    GlobalDepolarizing,
    LocalAmplitudeDamping,
    LocalPhaseDamping,
    LocalZRotation,
    SwapCorrelation,
    Composite,
)


def _amplitude_damping_1q(p: float) -> PauliTransferMatrix:
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(p)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(1.0 - p)], [0.0, 0.0]], dtype=complex)
    return liouville.ptm_from_kraus(KrausSet(1, (k0, k1)))


def _phase_damping_1q(p: float) -> PauliTransferMatrix:
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(p)]], dtype=complex)
    e1 = np.array([[0.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    return liouville.ptm_from_kraus(KrausSet(1, (e0, e1)))


def _z_rotation_1q(theta: float) -> PauliTransferMatrix:
    u = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    return liouville.ptm_from_unitary(u)


def _kron_power(m: PauliTransferMatrix, n_qubits: int) -> np.ndarray:
    out = np.array([[1.0]])
    for _ in range(n_qubits):
        out = np.kron(out, m.entries)
    return out


def _swap_unitary(n_qubits: int, i: int, j: int, beta: float) -> np.ndarray:
    """exp(i beta SWAP_ij) = cos(beta) I + i sin(beta) SWAP_ij (SWAP^2 = I)."""
    d = 2**n_qubits
    swap = np.zeros((d, d), dtype=complex)
    for basis in range(d):
        bi = (basis >> (n_qubits - 1 - i)) & 1
        bj = (basis >> (n_qubits - 1 - j)) & 1
        swapped = basis & ~((1 << (n_qubits - 1 - i)) | (1 << (n_qubits - 1 - j)))
        swapped |= bj << (n_qubits - 1 - i)
        swapped |= bi << (n_qubits - 1 - j)
        swap[swapped, basis] = 1.0
    return cos(beta) * np.eye(d) + 1j * sin(beta) * swap


def build(spec: NoiseSpec, n_qubits: int) -> PauliTransferMatrix:
    """Lower a noise spec to its transfer matrix on n_qubits."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    dim = 4**n_qubits
    if isinstance(spec, GlobalDepolarizing):
        diag = np.full(dim, spec.p)
        diag[0] = 1.0
        return PauliTransferMatrix(n_qubits, np.diag(diag))
    if isinstance(spec, LocalAmplitudeDamping):
        return PauliTransferMatrix(n_qubits, _kron_power(_amplitude_damping_1q(spec.p), n_qubits))
    if isinstance(spec, LocalPhaseDamping):
        return PauliTransferMatrix(n_qubits, _kron_power(_phase_damping_1q(spec.p), n_qubits))
    if isinstance(spec, LocalZRotation):
        return PauliTransferMatrix(n_qubits, _kron_power(_z_rotation_1q(spec.theta), n_qubits))
    if isinstance(spec, SwapCorrelation):
        for i, j, _ in spec.betas:
            if j >= n_qubits:
                raise ValueError(f"pair ({i}, {j}) outside a {n_qubits}-qubit register")
        out = None
        for i, j, beta in spec.betas:  # lexicographic order, first pair acts first
            factor = liouville.ptm_from_unitary(_swap_unitary(n_qubits, i, j, beta))
            out = factor if out is None else liouville.compose(factor, out)
        return out
    if isinstance(spec, Composite):
        out = None
        for part in spec.parts:  # first listed acts first
            factor = build(part, n_qubits)
            out = factor if out is None else liouville.compose(factor, out)
        return out
    raise TypeError(f"not a noise spec: {spec!r}")


def fidelity_of(spec: NoiseSpec, n_qubits: int) -> tuple[float, float]:
    """(quality parameter f, average gate fidelity) of the built channel."""
    f = liouville.quality_parameter(build(spec, n_qubits))
    return f, liouville.avg_fidelity(f, n_qubits)


# ---------------------------------------------------------------------------
# canonical textual form
# ---------------------------------------------------------------------------


def format_noise(spec: NoiseSpec) -> str:
    """Canonical text for a spec; parse_noise(format_noise(s)) == s."""
    if isinstance(spec, GlobalDepolarizing):
        return f"depolarizing({spec.p:g})"
    if isinstance(spec, LocalAmplitudeDamping):
        return f"amplitude_damping({spec.p:g})"
    if isinstance(spec, LocalPhaseDamping):
        return f"phase_damping({spec.p:g})"
    if isinstance(spec, LocalZRotation):
        return f"z_rotation({spec.theta:g})"
    if isinstance(spec, SwapCorrelation):
        args = ", ".join(f"beta_{i + 1}{j + 1}={b:g}" for i, j, b in spec.betas)
        return f"swap_correlation({args})"
    if isinstance(spec, Composite):
        return "compose(" + ", ".join(format_noise(p) for p in spec.parts) + ")"
    raise TypeError(f"not a noise spec: {spec!r}")


def _literal_number(node: ast.expr, text: str) -> float:
    try:
        value = ast.literal_eval(node)
    except (ValueError, SyntaxError):
        raise ValueError(f"expected a number in noise spec {text!r}")
    if not isinstance(value, (int, float)):
        raise ValueError(f"expected a number in noise spec {text!r}")
    return float(value)


def _from_ast(node: ast.expr, text: str) -> NoiseSpec:
    if isinstance(node, ast.Name) and node.id == "identity":
        return GlobalDepolarizing(1.0)
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ValueError(f"cannot parse noise spec {text!r}")
    name = node.func.id
    if name == "compose":
        if node.keywords or len(node.args) < 1:
            raise ValueError("compose(...) takes one or more channel arguments")
        return Composite(tuple(_from_ast(a, text) for a in node.args))
    if name == "swap_correlation":
        if node.args:
            raise ValueError("swap_correlation takes beta_IJ=value keywords only")
        betas = []
        for kw in node.keywords:
            label = kw.arg or ""
            if not (label.startswith("beta_") and len(label) == 7 and label[5:].isdigit()):
                raise ValueError(f"bad swap_correlation keyword {label!r}; expected beta_IJ")
            i, j = int(label[5]) - 1, int(label[6]) - 1  # text labels are 1-based
            betas.append((i, j, _literal_number(kw.value, text)))
        return SwapCorrelation(betas)
    simple = {
        "depolarizing": GlobalDepolarizing,
        "amplitude_damping": LocalAmplitudeDamping,
        "phase_damping": LocalPhaseDamping,
        "z_rotation": LocalZRotation,
    }
    if name not in simple:
        raise ValueError(f"unknown channel {name!r} in noise spec {text!r}")
    if node.keywords or len(node.args) != 1:
        raise ValueError(f"{name}(...) takes exactly one positional number")
    return simple[name](_literal_number(node.args[0], text))


def parse_noise(text: str) -> NoiseSpec:
    """Parse the canonical textual form into a NoiseSpec."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse noise spec {text!r}: {exc.msg}") from None
    return _from_ast(tree.body, text)
