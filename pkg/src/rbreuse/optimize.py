"""Variance-optimal circuit reuse counts under different cost models.

With per-circuit cost t(R) for R shots and a fixed total budget T0, the
estimator variance factorizes as

    V(R) = (t(R) / T0) * (Y / R + Z),

where Y is the mean within-circuit shot variance and Z the between-circuit
variance of expected outcomes.  T0 only scales the objective, so all optima
are computed on the unit-budget variance t(R) * (Y/R + Z) and T0 enters only
when an absolute variance is requested.

Cost models:

* ``ConstantCost(alpha, beta)``: t(R) = alpha + beta R.  The continuous
  optimum is R = sqrt(alpha Y / (beta Z)); the integer optimum is whichever
  of its floor/ceil neighbours evaluates lower.
* ``LadderCost(c1, c2, rc)``: t(R) = c1 ceil(R / rc) + c2 (batched data
  transfer).  Within a ladder step the variance strictly decreases in R, so
  optima sit at multiples of rc; with x = sqrt(c2 Y / (c1 Z rc)) the integer
  optimum is floor(x) rc or ceil(x) rc, the lower candidate clamped to rc.
* ``BoundedCost(alpha_l, beta_l, alpha_u, beta_u)``: only linear bounds
  alpha_l + beta_l R <= t(R) <= alpha_u + beta_u R are known.  No exact
  optimum exists, but R0 = alpha_l / beta_l guarantees a variance within a
  factor (alpha_u/alpha_l + beta_u/beta_l) of the minimum, and the optimum
  itself is confined to an interval (see :func:`optimal_interval_bounded`).

Edge conventions: Z = 0 makes reusing free (variance decreases in R forever)
and is reported as an unbounded optimum; Y = 0 makes the continuous optimum
0, infeasible for a repeat count, so R = 1 is reported with the raw optimum
kept visible; Y = Z = 0 is degenerate (zero variance everywhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "BoundedCost",
    "ConstantCost",
    "CostModel",
    "LadderCost",
    "NearOptimal",
    "OptReport",
    "grid_search_R",
    "near_optimal",
    "optimal_R_constant",
    "optimal_R_ladder",
    "optimal_interval_bounded",
    "speedup_vs_one",
    "unit_variance",
    "variance_at",
]


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


def _check_stats(y: float, z: float) -> None:
    if y < 0 or z < 0:
        raise ValueError("variance coefficients Y and Z must be nonnegative")


@dataclass(frozen=True)
class ConstantCost:
    """t(R) = alpha + beta R."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        _check_positive(alpha=self.alpha, beta=self.beta)

    def t(self, r):
        return self.alpha + self.beta * np.asarray(r, dtype=float)


@dataclass(frozen=True)
class LadderCost:
    """t(R) = c1 ceil(R / rc) + c2."""

    c1: float
    c2: float
    rc: int

    def __post_init__(self) -> None:
        _check_positive(c1=self.c1, c2=self.c2)
        if int(self.rc) != self.rc or self.rc < 1:
            raise ValueError(f"rc must be a positive integer, got {self.rc}")
        object.__setattr__(self, "rc", int(self.rc))

    def t(self, r):
        return self.c1 * np.ceil(np.asarray(r, dtype=float) / self.rc) + self.c2


@dataclass(frozen=True)
class BoundedCost:
    """Only bounds known: alpha_l + beta_l R <= t(R) <= alpha_u + beta_u R."""

    alpha_l: float
    beta_l: float
    alpha_u: float
    beta_u: float

    def __post_init__(self) -> None:
        _check_positive(
            alpha_l=self.alpha_l, beta_l=self.beta_l,
            alpha_u=self.alpha_u, beta_u=self.beta_u,
        )
        if self.alpha_l > self.alpha_u or self.beta_l > self.beta_u:
            raise ValueError("lower bounds must not exceed upper bounds")

    def lower(self, r):
        return self.alpha_l + self.beta_l * np.asarray(r, dtype=float)

    def upper(self, r):
        return self.alpha_u + self.beta_u * np.asarray(r, dtype=float)


CostModel = ConstantCost | LadderCost | BoundedCost


@dataclass(frozen=True)
class OptReport:
    """Result of an exact reuse-count optimization.

    ``r_star_real`` is the unclamped continuous optimizer (0 when Y = 0,
    inf when Z = 0, nan when degenerate); ``r_star`` the feasible integer
    optimum, or None when unbounded/degenerate.  ``variance_at_optimum`` is
    the unit-budget variance t(R*) (Y/R* + Z); for an unbounded optimum it
    is the R -> inf infimum, which is approached but never attained.
    """

    r_star_real: float
    r_star: int | None
    variance_at_optimum: float
    r0: int
    guarantee_factor: float
    speedup_vs_one: float
    unbounded: bool = False
    degenerate: bool = False
    interval: tuple[float, float] | None = None


class NearOptimal(NamedTuple):
    r0: int
    guarantee_factor: float


def unit_variance(y: float, z: float, cost: CostModel, r) -> np.ndarray | float:
    """t(R) * (Y/R + Z): the variance with the 1/T0 factor stripped."""
    _check_stats(y, z)
    if isinstance(cost, BoundedCost):
        raise ValueError("bounded cost model has no concrete t(R); use the bound helpers")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 1):
        raise ValueError("reuse count must be >= 1")
    out = cost.t(r_arr) * (y / r_arr + z)
    return float(out) if np.isscalar(r) or r_arr.ndim == 0 else out


def variance_at(y: float, z: float, cost: CostModel, t0: float, r) -> np.ndarray | float:
    """Estimator variance (t(R)/T0)(Y/R + Z) at reuse count R."""
    _check_positive(t0=t0)
    out = unit_variance(y, z, cost, r)
    return out / t0


def _integer_candidates(r_real: float) -> list[int]:
    lo = max(1, math.floor(r_real))
    hi = max(1, math.ceil(r_real))
    return sorted({lo, hi})


def _pick_min(y: float, z: float, cost: CostModel, candidates) -> tuple[int, float]:
    best_r, best_v = None, math.inf
    for r in candidates:  # ascending, so ties resolve to the smaller R
        v = unit_variance(y, z, cost, r)
        if v < best_v:
            best_r, best_v = r, v
    return best_r, best_v


def _near_optimal_constant(alpha: float, beta: float) -> NearOptimal:
    return NearOptimal(max(1, round(alpha / beta)), 2.0)


def optimal_R_constant(y: float, z: float, alpha: float, beta: float) -> OptReport:
    """Exact optimum under t(R) = alpha + beta R.

    The continuous optimizer sqrt(alpha Y / (beta Z)) follows from AM-GM on
    beta Y / R + alpha Z R (unit variance >= (sqrt(beta Y) + sqrt(alpha Z))^2
    with equality there); the integer optimum is a floor/ceil neighbour.
    """
    _check_stats(y, z)
    _check_positive(alpha=alpha, beta=beta)
    cost = ConstantCost(alpha, beta)
    r0, factor = _near_optimal_constant(alpha, beta)
    if y == 0 and z == 0:
        return OptReport(
            r_star_real=math.nan, r_star=None, variance_at_optimum=0.0,
            r0=r0, guarantee_factor=factor, speedup_vs_one=1.0, degenerate=True,
        )
    if z == 0:
        return OptReport(
            r_star_real=math.inf, r_star=None, variance_at_optimum=beta * y,
            r0=r0, guarantee_factor=factor, speedup_vs_one=math.inf, unbounded=True,
        )
    if y == 0:
        return OptReport(
            r_star_real=0.0, r_star=1,
            variance_at_optimum=unit_variance(y, z, cost, 1),
            r0=r0, guarantee_factor=factor, speedup_vs_one=1.0,
        )
    r_real = math.sqrt(alpha * y / (beta * z))
    r_star, v_star = _pick_min(y, z, cost, _integer_candidates(r_real))
    return OptReport(
        r_star_real=r_real,
        r_star=r_star,
        variance_at_optimum=v_star,
        r0=r0,
        guarantee_factor=factor,
        speedup_vs_one=speedup_vs_one(y, z, alpha, beta) if y > 0 and z > 0 else 1.0,
    )


def optimal_R_ladder(y: float, z: float, c1: float, c2: float, rc: int) -> OptReport:
    """Exact optimum under t(R) = c1 ceil(R/rc) + c2.

    Within a step the cost is flat and Y/R + Z falls, so only multiples of
    rc matter; over k = R/rc the objective (c1 k + c2)(Y/(k rc) + Z) is
    convex with continuous minimizer x = sqrt(c2 Y / (c1 Z rc)).
    """
    _check_stats(y, z)
    cost = LadderCost(c1, c2, rc)
    bounds = BoundedCost(
        alpha_l=c2, beta_l=c1 / cost.rc,
        alpha_u=c2 + c1 * (1.0 - 1.0 / cost.rc),
        beta_u=c1 / cost.rc,
    )
    r0, factor = near_optimal(bounds)
    if y == 0 and z == 0:
        return OptReport(
            r_star_real=math.nan, r_star=None, variance_at_optimum=0.0,
            r0=r0, guarantee_factor=factor, speedup_vs_one=1.0, degenerate=True,
        )
    if z == 0:
        return OptReport(
            r_star_real=math.inf, r_star=None, variance_at_optimum=(c1 / cost.rc) * y,
            r0=r0, guarantee_factor=factor, speedup_vs_one=math.inf, unbounded=True,
        )
    if y == 0:
        # flat in R within the first step; smallest R wins the tie
        return OptReport(
            r_star_real=0.0, r_star=1,
            variance_at_optimum=unit_variance(y, z, cost, 1),
            r0=r0, guarantee_factor=factor, speedup_vs_one=1.0,
        )
    x = math.sqrt(c2 * y / (c1 * z * cost.rc))
    candidates = sorted({max(1, math.floor(x)) * cost.rc, max(1, math.ceil(x)) * cost.rc})
    r_star, v_star = _pick_min(y, z, cost, candidates)
    naive = unit_variance(y, z, cost, 1)
    return OptReport(
        r_star_real=x * cost.rc,
        r_star=r_star,
        variance_at_optimum=v_star,
        r0=r0,
        guarantee_factor=factor,
        speedup_vs_one=naive / v_star,
    )


def near_optimal(cost: BoundedCost) -> NearOptimal:
    """Reuse count with a worst-case guarantee, needing no Y or Z.

    R0 = alpha_l / beta_l keeps the variance within a factor
    alpha_u/alpha_l + beta_u/beta_l of the minimum for every cost function
    between the bounds (rounded to the nearest feasible integer).
    """
    if not isinstance(cost, BoundedCost):
        raise TypeError("near_optimal needs a BoundedCost model")
    r0 = max(1, round(cost.alpha_l / cost.beta_l))
    factor = cost.alpha_u / cost.alpha_l + cost.beta_u / cost.beta_l
    return NearOptimal(r0, factor)


def optimal_interval_bounded(y: float, z: float, cost: BoundedCost) -> tuple[float, float]:
    """Interval guaranteed to contain the optimal reuse count.

    The optimum's lower-bound variance cannot exceed the best upper-bound
    variance, which reads beta_l Z R^2 - b R + alpha_l Y <= 0 with
    b = (sqrt(alpha_u Z) + sqrt(beta_u Y))^2 - (alpha_l Z + beta_l Y); the
    quadratic's roots (denominator 2a, a = beta_l Z) bound the optimum.
    Consistent bounds force b^2 >= 4ac.
    """
    if not isinstance(cost, BoundedCost):
        raise TypeError("optimal_interval_bounded needs a BoundedCost model")
    if not (y > 0 and z > 0):
        raise ValueError("interval requires Y > 0 and Z > 0 (see the edge conventions)")
    a = cost.beta_l * z
    # expanded form of (sqrt(alpha_u z) + sqrt(beta_u y))^2 - (alpha_l z + beta_l y):
    # the differences cancel exactly when the bounds coincide, avoiding the
    # catastrophic cancellation of the literal expression
    b = (
        (cost.alpha_u - cost.alpha_l) * z
        + (cost.beta_u - cost.beta_l) * y
        + 2.0 * math.sqrt(cost.alpha_u * cost.beta_u * y * z)
    )
    c = cost.alpha_l * y
    disc = b * b - 4.0 * a * c
    scale = max(b * b, abs(4.0 * a * c), 1.0)
    if disc < -1e-12 * scale:
        raise ValueError(f"negative discriminant {disc}: inconsistent cost bounds")
    if disc <= 1e-12 * scale:
        disc = 0.0  # below fp resolution: the interval is a point
    root = math.sqrt(disc)
    return ((b - root) / (2.0 * a), (b + root) / (2.0 * a))


def speedup_vs_one(y: float, z: float, alpha: float, beta: float) -> float:
    """V(R=1) / V(R*) under the constant-cost model.

    Equals (alpha + beta)(Y + Z) / (sqrt(beta Y) + sqrt(alpha Z))^2 >= 1;
    in the regime Y >> Z with alpha Z >> beta Y it approaches Y/Z.
    """
    if not (y > 0 and z > 0):
        raise ValueError("speedup requires Y > 0 and Z > 0")
    _check_positive(alpha=alpha, beta=beta)
    return (alpha + beta) * (y + z) / (math.sqrt(beta * y) + math.sqrt(alpha * z)) ** 2


def grid_search_R(y: float, z: float, t_fn: Callable, t0: float, r_max: int) -> int:
    """Exhaustive argmin of (t(R)/T0)(Y/R + Z) over R = 1..r_max.

    Ties break toward smaller R.  ``t_fn`` must accept an integer array
    (the CostModel ``t`` methods do).
    """
    _check_stats(y, z)
    _check_positive(t0=t0)
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    r = np.arange(1, r_max + 1, dtype=float)
    t = np.asarray(t_fn(r), dtype=float)
    if t.shape != r.shape:
        t = np.array([float(t_fn(float(v))) for v in r])
    values = (t / t0) * (y / r + z)
    return int(np.argmin(values)) + 1
