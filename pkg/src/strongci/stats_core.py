"""
Online sufficient statistics for the AR(1) coefficient.

After observing y_0, ..., y_T the data enter every martingale and interval
only through

    gamma0 = sum_{t=1..T} y_{t-1}^2,    gamma1 = sum_{t=1..T} y_{t-1} * y_t.

Both sums are accumulated as an unevaluated pair ``value + error`` (the
double-word scheme of Dekker/Knuth two-sum with renormalization), so a long
unit-root stream, where gamma0 grows like T^2, keeps full precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidObservationError, UndefinedEstimateError


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def compensated_add(value, err, x):
    """Add ``x`` to the double-word number ``value + err``.

    Works on Python floats and, elementwise, on numpy arrays. Returns the
    renormalized pair.
    """
    s, e = _two_sum(value, x)
    e = e + err
    hi = s + e
    return hi, e - (hi - s)


@dataclass(frozen=True)
class GammaStats:
    """Value type holding gamma0, gamma1, the step count and the last y.

    ``gamma0``/``gamma1`` are the best double approximations of the sums;
    the hidden ``err0``/``err1`` carry the rounding residue forward.
    """

    gamma0: float = 0.0
    gamma1: float = 0.0
    t: int = 0
    last_y: float = 0.0
    err0: float = field(default=0.0, repr=False, compare=False)
    err1: float = field(default=0.0, repr=False, compare=False)

    @property
    def ls_estimate(self) -> float:
        return ls_estimate(self)


def init_stats(y0: float) -> GammaStats:
    y0 = float(y0)
    if not math.isfinite(y0):
        raise InvalidObservationError(f"initial value must be finite, got {y0}")
    return GammaStats(0.0, 0.0, 0, y0)


def update(stats: GammaStats, y: float) -> GammaStats:
    """Return the statistics after observing ``y`` as the next value."""
    y = float(y)
    if not math.isfinite(y):
        raise InvalidObservationError(f"observation at t={stats.t + 1} is not finite: {y}")
    prev = stats.last_y
    sq = prev * prev
    # a square that underflows to 0 must not leave a nonzero cross term behind
    cross = prev * y if sq else 0.0
    g0, e0 = compensated_add(stats.gamma0, stats.err0, sq)
    g1, e1 = compensated_add(stats.gamma1, stats.err1, cross)
    return GammaStats(g0, g1, stats.t + 1, y, e0, e1)


def fold(stats: GammaStats, ys: Iterable[float]) -> GammaStats:
    for y in ys:
        stats = update(stats, y)
    return stats


def stats_from_values(values) -> GammaStats:
    """Fold a whole trajectory ``y_0, ..., y_T``."""
    values = np.asarray(values, dtype=np.float64)
    return fold(init_stats(values[0]), values[1:])


def ls_estimate(stats: GammaStats) -> float:
    """Least-squares estimate gamma1 / gamma0."""
    if stats.gamma0 == 0:
        raise UndefinedEstimateError("least-squares estimate undefined: gamma0 == 0")
    return stats.gamma1 / stats.gamma0


def with_sums(gamma0: float, gamma1: float, t: int = 0, last_y: float = 0.0) -> GammaStats:
    """Build statistics directly from sums, e.g. for what-if calculations."""
    if not (gamma0 >= 0 and math.isfinite(gamma0) and math.isfinite(gamma1)):
        raise InvalidObservationError(f"invalid sums gamma0={gamma0}, gamma1={gamma1}")
    return GammaStats(float(gamma0), float(gamma1), t, float(last_y))


class BatchAccumulator:
    """Vectorized twin of ``update`` over many independent streams.

    Holds one (gamma0, gamma1) double-word pair per stream and advances all
    streams by one observation per ``push`` call.
    """

    def __init__(self, y0):
        y0 = np.asarray(y0, dtype=np.float64)
        self.last_y = y0.copy()
        self.gamma0 = np.zeros_like(y0)
        self.gamma1 = np.zeros_like(y0)
        self._e0 = np.zeros_like(y0)
        self._e1 = np.zeros_like(y0)
        self.t = 0

    def push(self, y):
        y = np.asarray(y, dtype=np.float64)
        prev = self.last_y
        sq = prev * prev
        cross = np.where(sq != 0, prev * y, 0.0)
        self.gamma0, self._e0 = compensated_add(self.gamma0, self._e0, sq)
        self.gamma1, self._e1 = compensated_add(self.gamma1, self._e1, cross)
        self.last_y = y
        self.t += 1

    def stats(self, i) -> GammaStats:
        return GammaStats(
            float(self.gamma0[i]), float(self.gamma1[i]), self.t,
            float(self.last_y[i]), float(self._e0[i]), float(self._e1[i]),
        )
