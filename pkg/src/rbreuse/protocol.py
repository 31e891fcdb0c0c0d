"""Standard randomized benchmarking with circuit reusing.

The protocol: sample a length-m sequence of uniform Clifford gates, append
the global inverse gate, run the circuit R times against a fixed state and
effect, and average the observed bit over R shots and over N sequences.
Noise is a fixed channel applied after every gate of the sequence; the
inverse gate is applied noiselessly (its noise can be absorbed into the
measurement without changing the decay analysis), so the survival
probability of a sequence is

    p = <Q| G_inv (L G_m) ... (L G_2) (L G_1) |rho>

in the Liouville picture, with L the noise transfer matrix.

Reproducibility contract: all randomness of sequence i at length m comes
from the substream keyed (seed, m, i) -- gate draws first, then the shot
draw.  Aggregation uses fixed-size chunks with compensated summation across
chunk partials, so results are bit-identical for a given seed regardless of
how many worker threads execute the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cliffords, liouville, rng
from .liouville import (
    EffectVec,
    PauliTransferMatrix,
    ProbabilityBoundError,
    ShapeMismatchError,
    StateVec,
)
from .noise import NoiseSpec, build

__all__ = [
    "DecayFit",
    "DecayFitError",
    "DecayRow",
    "RBConfig",
    "RBResult",
    "SequenceResult",
    "StatPair",
    "analytic_A",
    "estimate_AB",
    "fit_decay",
    "run_rb",
    "simulate_shots",
    "survival_probability",
]

_CHUNK = 4096  # fixed chunk size; part of the determinism contract
_PROB_SLACK = liouville.PROBABILITY_SLACK


def _noise_ptm(noise, n_qubits: int) -> PauliTransferMatrix:
    if isinstance(noise, PauliTransferMatrix):
        if noise.n_qubits != n_qubits:
            raise ShapeMismatchError("noise channel qubit count mismatch")
        return noise
    return build(noise, n_qubits)


@dataclass(frozen=True)
class RBConfig:
    """Protocol parameters for one benchmarking run."""

    n_qubits: int
    noise: NoiseSpec
    lengths: tuple[int, ...]
    n_sequences: int
    reuse: int
    rho: StateVec
    effect: EffectVec
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(int(m) for m in self.lengths))
        if not self.lengths or any(m < 1 for m in self.lengths):
            raise ValueError("lengths must be a non-empty list of positive integers")
        if self.n_sequences < 1 or self.reuse < 1:
            raise ValueError("sequence and reuse counts must be >= 1")
        if self.rho.n_qubits != self.n_qubits or self.effect.n_qubits != self.n_qubits:
            raise ShapeMismatchError("state/effect dimensions do not match n_qubits")


@dataclass(frozen=True)
class SequenceResult:
    """Survival probability and shot count of one sequence."""

    length: int
    index: int
    probability: float
    shots: int
    reuse: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability outside [0, 1]")
        if not 0 <= self.shots <= self.reuse:
            raise ValueError("shot count outside [0, R]")


@dataclass(frozen=True)
class StatPair:
    """First and second moments of per-sequence survival probabilities.

    a and b estimate E(p) and E(p^2) over sequences; the derived variance
    coefficients are y = a - b (mean within-sequence shot variance) and
    z = b - a^2 (between-sequence variance).  y is nonnegative term by term;
    z is nonnegative in population and may dip below zero only within
    sampling error.
    """

    a: float
    b: float
    y: float
    z: float
    stderr_a: float
    stderr_b: float
    n_mc: int

    def __post_init__(self) -> None:
        tol = 1e-12
        if not (-tol <= self.b <= self.a + tol and self.a <= 1.0 + tol):
            raise ValueError("moment ordering 0 <= B <= A <= 1 violated")
        if self.y < -tol or abs(self.y - (self.a - self.b)) > tol:
            raise ValueError("Y must equal A - B and be nonnegative")
        err_z = self.stderr_b + 2.0 * self.a * self.stderr_a
        if self.z < -(3.0 * err_z + tol):
            raise ValueError("Z below -3 standard errors: moments are inconsistent")

    def snapped_yz(self, tol: float = 1e-9) -> tuple[float, float]:
        """(Y, Z) with deterministic degeneracies snapped to exact zero.

        Identical per-sequence probabilities leave Z at a rounding-level
        residual, and probabilities pinned to {0, 1} do the same to Y; both
        sit many orders below any statistically meaningful estimate, so
        values at or below `tol` (matching the probability slack) are
        reported as exact zeros for the optimizer's edge-case handling.
        """
        y = 0.0 if self.y <= tol else self.y
        z = 0.0 if abs(self.z) <= tol else self.z
        return y, max(z, 0.0)


@dataclass(frozen=True)
class DecayRow:
    """One decay-table row: statistics of X-bar over N sequences."""

    length: int
    mean: float
    variance: float
    n_sequences: int
    reuse: int


@dataclass(frozen=True)
class RBResult:
    """Decay table plus per-sequence records of a benchmarking run."""

    config: RBConfig
    rows: tuple[DecayRow, ...]
    records: tuple[SequenceResult, ...] = field(repr=False)

    def decay_points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(lengths, means, variances) arrays for fitting."""
        m = np.array([r.length for r in self.rows], dtype=float)
        mean = np.array([r.mean for r in self.rows])
        var = np.array([r.variance for r in self.rows])
        return m, mean, var


def survival_probability(noise, sequence: cliffords.GateSequence, rho: StateVec,
                         effect: EffectVec) -> float:
    """Survival probability of one explicit sequence (noiseless inverse)."""
    n = sequence.n_qubits
    if rho.n_qubits != n or effect.n_qubits != n:
        raise ShapeMismatchError("state/effect dimensions do not match the sequence")
    lam = _noise_ptm(noise, n).entries
    state = rho.coefficients.copy()
    for gate in sequence.gates:
        out = np.empty_like(state)
        out[gate.perm] = gate.sign * state
        state = lam @ out
    out = np.empty_like(state)
    out[sequence.inverse_gate.perm] = sequence.inverse_gate.sign * state
    value = float(effect.coefficients @ out)
    if value < -_PROB_SLACK or value > 1.0 + _PROB_SLACK:
        raise ProbabilityBoundError(f"survival probability {value!r} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def simulate_shots(p: float, reuse: int, stream: np.random.Generator) -> int:
    """Number of successes in R Bernoulli(p) shots (one binomial draw)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if reuse < 1:
        raise ValueError("reuse count must be >= 1")
    return int(stream.binomial(reuse, p))


def _draw_gate_indices(n_qubits: int, length: int, count: int, seed: int,
                       keep_streams: bool):
    """Gate index draws for `count` sequences, each from its own substream."""
    order = cliffords.clifford_group_order(n_qubits)
    indices = np.empty((count, length), dtype=np.int64)
    streams = [] if keep_streams else None
    for i in range(count):
        g = rng.sequence_stream(seed, length, i)
        indices[i] = g.integers(order, size=length)
        if keep_streams:
            streams.append(g)
    return indices, streams


def _propagate_chunk(n_qubits: int, indices: np.ndarray, rho_row: np.ndarray,
                     effect_row: np.ndarray, noise_t: np.ndarray) -> np.ndarray:
    """Survival probabilities for one chunk of sequences (vectorized).

    Gates act as signed permutations (scatter), noise as one dense matmul
    per step.  The composed sequence action is tracked so the inverse gate
    can be applied exactly: with orthogonal signed permutations,
    <Q| G_inv |s> = <G_total Q | s>.
    """
    count, length = indices.shape
    dim = rho_row.shape[0]
    states = np.tile(rho_row, (count, 1))
    buf = np.empty_like(states)
    total_perm = np.tile(np.arange(dim), (count, 1))
    total_sign = np.ones((count, dim), dtype=np.int8)
    for t in range(length):
        perms, signs = cliffords.index_action(n_qubits, indices[:, t])
        np.put_along_axis(buf, perms, states * signs, axis=1)
        states, buf = buf, states
        states = states @ noise_t
        # composed action: total' = gate o total
        total_sign = total_sign * np.take_along_axis(signs, total_perm, axis=1)
        total_perm = np.take_along_axis(perms, total_perm, axis=1)
    effect_eff = np.zeros((count, dim))
    np.put_along_axis(effect_eff, total_perm, total_sign * effect_row, axis=1)
    return np.einsum("ij,ij->i", effect_eff, states)


def _batch_survival(noise_ptm: PauliTransferMatrix, n_qubits: int, length: int,
                    count: int, seed: int, rho: StateVec, effect: EffectVec, *,
                    keep_streams: bool = False, threads: int = 1):
    """Survival probabilities of `count` independent sequences.

    Work is split into fixed-size chunks; each chunk is pure and fills only
    its own output slot, so any worker count yields identical results.
    """
    indices, streams = _draw_gate_indices(n_qubits, length, count, seed, keep_streams)
    rho_row = rho.coefficients
    effect_row = effect.coefficients
    noise_t = np.ascontiguousarray(noise_ptm.entries.T)
    spans = [(lo, min(lo + _CHUNK, count)) for lo in range(0, count, _CHUNK)]
    probs = np.empty(count)

    def work(span):
        lo, hi = span
        probs[lo:hi] = _propagate_chunk(
            n_qubits, indices[lo:hi], rho_row, effect_row, noise_t
        )

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, spans))
    else:
        for span in spans:
            work(span)

    bad = (probs < -_PROB_SLACK) | (probs > 1.0 + _PROB_SLACK)
    if np.any(bad):
        worst = probs[bad][0]
        raise ProbabilityBoundError(f"survival probability {worst!r} outside [0, 1]")
    np.clip(probs, 0.0, 1.0, out=probs)
    return probs, streams


def _chunked_mean(values: np.ndarray) -> float:
    """Mean via fixed-chunk partial sums combined with compensated summation."""
    partials = [float(np.sum(values[lo : lo + _CHUNK])) for lo in range(0, len(values), _CHUNK)]
    return math.fsum(partials) / len(values)


def analytic_A(noise, length: int, rho: StateVec, effect: EffectVec) -> float:
    """Closed-form sequence-averaged survival probability.

    Averaging the conjugated noise over a unitary 2-design collapses each
    noisy layer to a depolarizing channel with the noise's quality parameter
    f, giving A(m) = ((d Tr(Q rho) - Tr Q)/d) f^m + Tr(Q)/d.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    n = rho.n_qubits
    f = liouville.quality_parameter(_noise_ptm(noise, n))
    d = float(2**n)
    tr_q = effect.trace()
    tr_q_rho = float(effect.coefficients @ rho.coefficients)
    return (d * tr_q_rho - tr_q) / d * f**length + tr_q / d


def estimate_AB(noise, length: int, rho: StateVec, effect: EffectVec, n_mc: int,
                seed: int, *, threads: int = 1) -> StatPair:
    """Monte Carlo moments of the survival probability over n_mc sequences.

    y is accumulated directly as the mean of p(1 - p), which is nonnegative
    term by term, rather than as the difference of the two moment estimates.
    """
    if n_mc < 2:
        raise ValueError("n_mc must be >= 2")
    n = rho.n_qubits
    probs, _ = _batch_survival(
        _noise_ptm(noise, n), n, length, n_mc, seed, rho, effect, threads=threads
    )
    sq = probs * probs
    a = _chunked_mean(probs)
    b = _chunked_mean(sq)
    y = _chunked_mean(probs * (1.0 - probs))
    z = b - a * a
    stderr_a = float(np.std(probs, ddof=1) / np.sqrt(n_mc))
    stderr_b = float(np.std(sq, ddof=1) / np.sqrt(n_mc))
    return StatPair(a=a, b=b, y=y, z=z, stderr_a=stderr_a, stderr_b=stderr_b, n_mc=n_mc)


def run_rb(config: RBConfig, *, threads: int = 1) -> RBResult:
    """Run the full protocol: fresh sequences per length, R shots each."""
    noise_ptm = _noise_ptm(config.noise, config.n_qubits)
    rows = []
    records: list[SequenceResult] = []
    for length in config.lengths:
        probs, streams = _batch_survival(
            noise_ptm,
            config.n_qubits,
            length,
            config.n_sequences,
            config.seed,
            config.rho,
            config.effect,
            keep_streams=True,
            threads=threads,
        )
        shots = np.empty(config.n_sequences, dtype=np.int64)
        for i, stream in enumerate(streams):
            shots[i] = stream.binomial(config.reuse, probs[i])
        fractions = shots / config.reuse
        mean = _chunked_mean(fractions)
        if config.n_sequences > 1:
            variance = float(np.var(fractions, ddof=1))
        else:
            variance = float("nan")
        rows.append(DecayRow(length, mean, variance, config.n_sequences, config.reuse))
        records.extend(
            SequenceResult(length, i, float(probs[i]), int(shots[i]), config.reuse)
            for i in range(config.n_sequences)
        )
    return RBResult(config, tuple(rows), tuple(records))


# ---------------------------------------------------------------------------
# exponential-decay fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    """Weighted least-squares fit of mean(m) = a f^m + b."""

    a: float
    f: float
    b: float
    cov: np.ndarray = field(repr=False)
    stderr: tuple[float, float, float]
    ssr: float
    iterations: int
    converged: bool

    @property
    def at_boundary(self) -> bool:
        return self.f >= 1.0 - 1e-12


class DecayFitError(RuntimeError):
    """Fit failed; carries the best iterate reached (may be None)."""

    def __init__(self, message: str, best: DecayFit | None = None):
        super().__init__(message)
        self.best = best


def _model(theta: np.ndarray, m: np.ndarray) -> np.ndarray:
    a, f, b = theta
    return a * f**m + b


def _jacobian(theta: np.ndarray, m: np.ndarray) -> np.ndarray:
    a, f, _ = theta
    fm = f**m
    with np.errstate(divide="ignore", invalid="ignore"):
        dfm = np.where(m > 0, a * m * f ** (m - 1.0), 0.0)
    return np.column_stack([fm, dfm, np.ones_like(m)])


def fit_decay(lengths, values, weights=None, baseline_guess: float | None = None,
              max_iterations: int = 200, rel_tol: float = 1e-10) -> DecayFit:
    """Fit a f^m + b to decay points by damped Gauss-Newton.

    Initialization is a log-domain linear regression of (value - b0) on m,
    where b0 is `baseline_guess` (callers fitting benchmarking decays should
    pass the analytic asymptote Tr(Q)/d; without a guess, a value slightly
    below the smallest observation is used).  The decay parameter is
    constrained to (0, 1].

    Raises DecayFitError, carrying the best iterate, when the iteration
    budget is exhausted or the parameters are unidentifiable (for example
    constant data, where a and b cannot be split and no confident decay
    parameter exists).
    """
    m = np.asarray(lengths, dtype=float)
    y = np.asarray(values, dtype=float)
    if m.shape != y.shape or m.ndim != 1:
        raise ValueError("lengths and values must be matching 1-d arrays")
    if len(np.unique(m)) < 3:
        raise ValueError("need at least 3 distinct lengths")
    if np.any((y < -1e-9) | (y > 1.0 + 1e-9)):
        raise ValueError("decay values must lie in [0, 1]")
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    sw = np.sqrt(w)

    if baseline_guess is None:
        spread = float(y.max() - y.min())
        b0 = float(y.min()) - 0.1 * spread - 1e-9
    else:
        b0 = float(baseline_guess)

    # log-domain initialization on the decaying part
    shifted = y - b0
    mask = shifted > 1e-12
    if mask.sum() >= 2 and len(np.unique(m[mask])) >= 2:
        slope, intercept = np.polyfit(m[mask], np.log(shifted[mask]), 1)
        f0 = float(np.clip(np.exp(slope), 1e-6, 1.0))
        a0 = float(np.exp(intercept))
    else:
        f0 = 0.9
        a0 = max(float(y.max()) - b0, 1e-6)
    theta = np.array([a0, f0, b0])

    def ssr_of(t: np.ndarray) -> float:
        r = sw * (_model(t, m) - y)
        return float(r @ r)

    ssr = ssr_of(theta)
    lam = 1e-3
    converged = False
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        jac = sw[:, None] * _jacobian(theta, m)
        resid = sw * (_model(theta, m) - y)
        jtj = jac.T @ jac
        jtr = jac.T @ resid
        step = None
        for _ in range(60):  # inflate damping until the step helps
            try:
                delta = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj) + 1e-30), -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = theta + delta
            trial[1] = min(max(trial[1], 1e-12), 1.0)
            trial_ssr = ssr_of(trial)
            if trial_ssr <= ssr + 1e-30:
                step = trial - theta
                theta, ssr = trial, trial_ssr
                lam = max(lam / 3.0, 1e-12)
                break
            lam *= 10.0
        if step is None:
            # damping exhausted: no direction improves, so accept the point
            # as stationary when the gradient has effectively vanished
            converged = bool(np.max(np.abs(jtr)) < 1e-8 * max(1.0, ssr))
            break
        rel = np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-12))
        if rel < rel_tol or ssr < 1e-30:
            converged = True
            break

    jac = sw[:, None] * _jacobian(theta, m)
    jtj = jac.T @ jac
    dof = len(y) - 3
    scale = ssr / dof if dof > 0 else 0.0
    singular = not np.all(np.isfinite(jtj)) or np.linalg.cond(jtj) > 1e12
    if singular:
        cov = np.full((3, 3), np.nan)
        stderr = (float("nan"),) * 3
    else:
        cov = np.linalg.inv(jtj) * scale
        stderr = tuple(float(s) for s in np.sqrt(np.maximum(np.diag(cov), 0.0)))
    fit = DecayFit(
        a=float(theta[0]),
        f=float(theta[1]),
        b=float(theta[2]),
        cov=cov,
        stderr=stderr,
        ssr=ssr,
        iterations=iterations,
        converged=converged,
    )
    if singular:
        raise DecayFitError(
            "decay parameter is unidentifiable (singular normal equations); "
            "typically the data shows no decay to split between a and b",
            best=fit,
        )
    if not converged:
        raise DecayFitError(
            f"no convergence after {iterations} iterations (SSR {ssr:.3e})", best=fit
        )
    return fit
