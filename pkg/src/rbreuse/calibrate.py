"""Calibration of the ladder cost model from measured runtimes.

Platforms that transfer measurement data in fixed-size batches show a
per-circuit runtime t(R) = c1 ceil(R / rc) + c2: c2 covers generating a new
circuit (sampling, inverse-gate computation, compilation) and c1 is the cost
per transfer batch of rc shots.  Given wall-time records (R, N, T) the fit
regresses T/N on ceil(R / rc) for each candidate batch size and keeps the
candidate with the smallest relative residual.  rc comes from a discrete
candidate grid because it is a platform batching constant, not a free
continuous parameter, and the per-candidate problem is then ordinary linear
least squares.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .optimize import BoundedCost, LadderCost

__all__ = [
    "CalibrationError",
    "LadderFit",
    "RuntimeRecord",
    "allocate_sequences",
    "fit_ladder",
    "ladder_bounds",
    "predict_T0",
]


class CalibrationError(ValueError):
    """No candidate batch size produced a valid fit; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class RuntimeRecord:
    """One measured run: N circuits, R shots each, total wall time T."""

    reuse: int
    n_sequences: int
    seconds: float

    def __post_init__(self) -> None:
        if self.reuse < 1 or self.n_sequences < 1 or not self.seconds > 0:
            raise ValueError("runtime record fields must be positive")


@dataclass(frozen=True)
class LadderFit:
    """Fitted ladder cost model with per-record predictions."""

    c1: float
    c2: float
    rc: int
    residual: float  # relative RMS of T0/T - 1 over the input records
    predicted: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (self.c1 > 0 and self.c2 > 0 and self.rc >= 1):
            raise ValueError("ladder coefficients must be positive, rc >= 1")

    def t(self, r):
        """Per-circuit cost at reuse count R."""
        return self.c1 * np.ceil(np.asarray(r, dtype=float) / self.rc) + self.c2

    def as_cost_model(self) -> LadderCost:
        return LadderCost(self.c1, self.c2, self.rc)


def fit_ladder(records, rc_candidates) -> LadderFit:
    """Least-squares ladder fit with batch size chosen from a candidate grid.

    For each candidate rc the model is linear in ceil(R/rc): ordinary
    regression of T/N yields (c1, c2).  Candidates whose regressor is
    constant (single distinct ceiling value) or whose coefficients come out
    nonpositive are rejected; among the rest the relative RMS of T0/T - 1
    decides.  Raises CalibrationError with per-candidate diagnostics when
    nothing survives.
    """
    records = [
        r if isinstance(r, RuntimeRecord) else RuntimeRecord(*r) for r in records
    ]
    if len(records) < 3:
        raise CalibrationError("need at least 3 runtime records")
    rc_candidates = [int(rc) for rc in rc_candidates]
    if not rc_candidates or any(rc < 1 for rc in rc_candidates):
        raise CalibrationError("rc candidates must be positive integers")

    reuse = np.array([r.reuse for r in records], dtype=float)
    counts = np.array([r.n_sequences for r in records], dtype=float)
    seconds = np.array([r.seconds for r in records], dtype=float)
    per_circuit = seconds / counts

    best: LadderFit | None = None
    diagnostics: dict[int, str] = {}
    for rc in rc_candidates:
        steps = np.ceil(reuse / rc)
        if len(np.unique(steps)) < 2:
            diagnostics[rc] = "regressor constant: c1 unidentifiable"
            continue
        design = np.column_stack([steps, np.ones_like(steps)])
        (c1, c2), *_ = np.linalg.lstsq(design, per_circuit, rcond=None)
        if c1 <= 0 or c2 <= 0:
            diagnostics[rc] = f"nonpositive coefficients (c1={c1:.4g}, c2={c2:.4g})"
            continue
        predicted = (c1 * steps + c2) * counts
        residual = float(np.sqrt(np.mean((predicted / seconds - 1.0) ** 2)))
        diagnostics[rc] = f"residual {residual:.4g}"
        fit = LadderFit(float(c1), float(c2), rc, residual, tuple(map(float, predicted)))
        if best is None or residual < best.residual:
            best = fit
    if best is None:
        raise CalibrationError(
            "no rc candidate produced a positive-coefficient fit", diagnostics
        )
    return best


def predict_T0(fit: LadderFit, n_sequences: int, reuse: int) -> float:
    """Modeled total runtime: c1 N ceil(R/rc) + c2 N."""
    if n_sequences < 0 or reuse < 1:
        raise ValueError("need n_sequences >= 0 and reuse >= 1")
    return float(n_sequences * fit.t(reuse))


def allocate_sequences(fit: LadderFit, t0_budget: float, reuse: int) -> int:
    """Largest sequence count fitting the budget: floor(T0 / t(R)).

    Flooring never exceeds the budget; a budget below one circuit's cost
    allocates zero and warns.
    """
    if not t0_budget > 0:
        raise ValueError("budget must be positive")
    per_circuit = float(fit.t(reuse))
    n = math.floor(t0_budget / per_circuit)
    if n == 0:
        warnings.warn(
            f"budget {t0_budget:.4g} s is below one circuit's cost {per_circuit:.4g} s",
            stacklevel=2,
        )
    return n


def ladder_bounds(fit: LadderFit) -> BoundedCost:
    """Linear envelopes of the ladder: R/rc <= ceil(R/rc) <= R/rc + 1 - 1/rc.

    Feeding these to the near-optimal rule gives R0 = c2 rc / c1 with
    guarantee factor 2 + (c1/c2)(1 - 1/rc); at rc = 1 the ladder is a
    constant-cost model and the factor collapses to 2.
    """
    slope = fit.c1 / fit.rc
    return BoundedCost(
        alpha_l=fit.c2,
        beta_l=slope,
        alpha_u=fit.c2 + fit.c1 * (1.0 - 1.0 / fit.rc),
        beta_u=slope,
    )
