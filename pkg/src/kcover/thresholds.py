"""Closed-form acceptance thresholds and the two-threshold grid search.

The single-threshold value is the minimum of a count-dependent and a
count-free candidate; which one wins flips at k ~ 0.667*n.  The two-phase
(explore/exploit) parameters come from minimising the worst case of four
ratio terms over a theta grid, mirroring how the values were originally
obtained (grid precision rather than continuous optimisation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numeric
from .errors import ConfigError, SolverEmptyError


def _check_kn(k: int, n: int) -> None:
    if k < 2 or k > n - 1:
        raise ConfigError(f"need 2 <= k <= n-1, got k={k} n={n}")


def soa_theta(k: int, n: int, setting: str = "UL", m: Optional[float] = None) -> float:
    """Single threshold for a known release count.

    UL and US share one formula; FL weights the count-dependent candidate by
    the maximum item length m.  AL has no sound threshold, callers must pick
    their own.
    """
    _check_kn(k, n)
    if setting in ("UL", "US"):
        a = (math.sqrt(1 + 2 * (k - 1) * (n - k)) - 1) / (2 * k - 2)
        b = (math.sqrt(9 * k * k - 14 * k + 9) - k - 1) / (4 * (k - 1))
        return min(a, b)
    if setting == "FL":
        if m is None or m <= 1.0:
            raise ConfigError("FL threshold needs m > 1")
        a = (math.sqrt(1 + 2 * (k - 1) * (n - k) * m) - 1) / (2 * k - 2)
        b = (
            math.sqrt((1 + 8 * m) * k * k - (6 + 8 * m) * k + 9) - k - 1
        ) / (4 * (k - 1))
        return min(a, b)
    raise ConfigError(f"no default threshold for setting {setting!r}")


def soa_an_theta(k: int, setting: str = "UL", m: Optional[float] = None) -> float:
    """Single threshold when the release count is unknown (count-free form)."""
    if k < 2:
        raise ConfigError(f"need k >= 2, got {k}")
    if setting in ("UL", "US"):
        return (math.sqrt(9 * k * k - 14 * k + 9) - k - 1) / (4 * (k - 1))
    if setting == "FL":
        if m is None or m <= 1.0:
            raise ConfigError("FL threshold needs m > 1")
        return (
            math.sqrt((1 + 8 * m) * k * k - (6 + 8 * m) * k + 9) - k - 1
        ) / (4 * (k - 1))
    raise ConfigError(f"no default threshold for setting {setting!r}")


def theta_crossover(n: int) -> int:
    """Smallest k at which the count-dependent candidate becomes the minimum.

    Below this k the count-free candidate is smaller; at and above it the
    count-dependent one is.  Equals ceil(667*n/1000).
    """
    if n < 3:
        raise ConfigError(f"need n >= 3, got {n}")
    return -((-667 * n) // 1000)


@dataclass(frozen=True)
class DoaSolution:
    """Feasible two-phase parameter triple with its certified objective."""

    omega: int
    theta1: float
    theta2: float
    s: float
    q: float
    value: float  # worst-case ratio objective C


def _objective_terms(k, n, omega, s, q, t1, t2, known_count):
    c1 = 1.0 + 2.0 * t1
    c2 = 1.0 + 2.0 * t2 / (1.0 + ((omega - s) / s) * t1)
    c3 = k / (s + 1.0 + (omega - s - 1.0) * t1)
    if known_count:
        c4 = np.minimum(float(k), (n - k) + q) / q
    else:
        c4 = k / q
    return c1, c2, c3, c4


def doa_objective(
    k: int,
    n: int,
    omega: int,
    theta1: float,
    theta2: float,
    known_count: bool = True,
) -> Optional[tuple[float, float, float]]:
    """Worst-case ratio of the two-phase policy at one parameter triple.

    Returns (C, s, q), or None when the derived component count s falls
    outside [1, omega-1]: the four-term objective is only a certified bound
    inside that range, so out-of-range triples are disqualified, never
    clamped.
    """
    if not (1 <= omega <= k):
        raise ConfigError(f"need 1 <= omega <= k, got omega={omega} k={k}")
    if not (0.0 < theta1 <= theta2 <= 1.0):
        raise ConfigError(
            f"need 0 < theta1 <= theta2 <= 1, got ({theta1}, {theta2})"
        )
    _check_kn(k, n)
    denom = 1.0 + 2.0 * theta2 - theta1
    s = (k + (1.0 - omega) * theta1 - 2.0 * theta2) / denom
    if s < 1.0 - numeric.EPS or s > omega - 1.0 + numeric.EPS:
        return None
    q = 1.0 + (omega - 1) * theta1 + (k - omega) * theta2
    c1, c2, c3, c4 = _objective_terms(k, n, omega, s, q, theta1, theta2, known_count)
    return float(max(c1, c2, c3, c4)), float(s), float(q)


def _theta_grid(step: float) -> np.ndarray:
    if not (0.0 < step <= 1.0):
        raise ConfigError(f"step must be in (0, 1], got {step}")
    count = int(math.floor(1.0 / step + 1e-12))
    grid = np.arange(1, count + 1, dtype=np.float64) * step
    # Snap the top of the grid onto 1.0 so theta2 <= 1 survives float drift.
    grid[grid > 1.0 - 1e-12] = 1.0
    return grid


def solve_doa(
    k: int, n: int, step: float = 0.01, known_count: bool = True
) -> DoaSolution:
    """Exhaustive grid search for the best feasible two-phase triple.

    omega ranges over [ceil((k+1)/5), k]; theta1 < theta2 range over
    multiples of `step` up to 1.  Ties break deterministically by
    (C, theta1, omega, theta2), all minimised, so parallel or refined runs
    reproduce the same triple.
    """
    _check_kn(k, n)
    grid = _theta_grid(step)
    g = grid.size
    t1 = grid[:, None]  # rows: theta1
    t2 = grid[None, :]  # cols: theta2
    strict = np.triu(np.ones((g, g), dtype=bool), 1)  # theta1 < theta2

    best: Optional[tuple[float, float, int, float]] = None  # (C, t1, omega, t2)
    omega_lo = max(1, -((-(k + 1)) // 5))
    for omega in range(omega_lo, k + 1):
        denom = 1.0 + 2.0 * t2 - t1
        s = (k + (1.0 - omega) * t1 - 2.0 * t2) / denom
        feas = strict & (s >= 1.0 - numeric.EPS) & (s <= omega - 1.0 + numeric.EPS)
        if not feas.any():
            continue
        q = 1.0 + (omega - 1) * t1 + (k - omega) * t2
        with np.errstate(divide="ignore", invalid="ignore"):
            c1, c2, c3, c4 = _objective_terms(
                k, n, omega, s, q, t1, t2, known_count
            )
            cmax = np.maximum(np.maximum(c1, c2), np.maximum(c3, c4))
        cmax = np.where(feas, cmax, np.inf)
        cmin = cmax.min()
        if not np.isfinite(cmin):
            continue
        i1, i2 = np.argwhere(cmax == cmin)[0]  # row-major: min theta1, then theta2
        cand = (float(cmin), float(grid[i1]), omega, float(grid[i2]))
        if best is None or cand < best:
            best = cand
    if best is None:
        raise SolverEmptyError(
            f"no feasible two-phase triple for k={k} n={n} step={step}"
        )
    c, th1, omega, th2 = best
    result = doa_objective(k, n, omega, th1, th2, known_count)
    assert result is not None
    _, s, q = result
    return DoaSolution(omega, th1, th2, s, q, c)
