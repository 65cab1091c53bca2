"""
Likelihood-ratio and Gaussian-mixture test martingales for the AR(1)
coefficient, evaluated in log space.

For a null value ``alpha`` and an alternative ``alpha_true`` the likelihood
ratio after T steps is

    log S = ((alpha^2 - alpha_true^2) * gamma0 + 2 (alpha_true - alpha) * gamma1) / 2.

Averaging S over alpha_true ~ N(alpha, a^2) has the closed form

    log S = -log(a^2 gamma0 + 1) / 2 + a^2 (gamma1 - alpha gamma0)^2 / (2 (a^2 gamma0 + 1)),

which is a nonnegative martingale with initial value 1 under the null.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidConfigError, InvalidInputError
from .stats_core import GammaStats, stats_from_values

DEFAULT_A = 0.1


@dataclass(frozen=True)
class MixtureParams:
    """Standard deviation ``a`` of the normal mixing distribution."""

    a: float = DEFAULT_A

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidConfigError(f"mixture scale a must be positive and finite, got {self.a}")


def _finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise InvalidInputError(f"non-finite input: {v}")


def log_lr(alpha: float, alpha_true: float, stats: GammaStats) -> float:
    """Log of the likelihood ratio of ``alpha_true`` against ``alpha``."""
    _finite(alpha, alpha_true, stats.gamma0, stats.gamma1)
    g0, g1 = stats.gamma0, stats.gamma1
    return ((alpha - alpha_true) * (alpha + alpha_true) * g0 + 2.0 * (alpha_true - alpha) * g1) / 2.0


def log_mixture(alpha, params: MixtureParams, stats: GammaStats):
    """Log of the mixture martingale at null value ``alpha``.

    ``alpha`` may be a scalar or an array; the result has the same shape.
    """
    _finite(alpha, stats.gamma0, stats.gamma1)
    out = _log_mixture(np.asarray(alpha, dtype=np.float64), params.a, stats.gamma0, stats.gamma1)
    return float(out) if np.ndim(out) == 0 else out


def _log_mixture(alpha, a, gamma0, gamma1):
    # array-friendly core, shared with the Monte Carlo harness
    a2g0 = a * a * gamma0
    resid = gamma1 - alpha * gamma0
    return -0.5 * np.log1p(a2g0) + a * a * resid * resid / (2.0 * (a2g0 + 1.0))


def capital(log_s):
    """exp(log_s), saturating to +inf instead of overflowing."""
    with np.errstate(over="ignore"):
        out = np.exp(log_s)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class MartingaleCurve:
    """Final-time log capital ``log S_T^alpha`` over a grid of null values."""

    alpha: np.ndarray
    log_s: np.ndarray
    stats: GammaStats
    params: MixtureParams

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return zip(self.alpha.tolist(), self.log_s.tolist())

    def __len__(self):
        return len(self.alpha)

    @property
    def argmin(self) -> float:
        return float(self.alpha[np.argmin(self.log_s)])

    def csv_rows(self):
        yield from self


def alpha_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid ``lo, lo+step, ...`` not exceeding ``hi``."""
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise InvalidInputError("grid bounds and step must be finite")
    if step <= 0 or hi < lo:
        raise InvalidInputError(f"need step > 0 and lo <= hi, got ({lo}, {hi}, {step})")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def martingale_curve(path, params: MixtureParams, alpha_grid: Sequence[float]) -> MartingaleCurve:
    """Evaluate ``log S_T^alpha`` at the final time of ``path``.

    ``path`` is a :class:`~strongci.ar1_model.Path`, a raw array of
    ``y_0..y_T``, or an already folded :class:`GammaStats`.
    """
    grid = np.asarray(alpha_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidInputError("alpha grid must be a nonempty 1-d sequence")
    if isinstance(path, GammaStats):
        stats = path
    else:
        stats = stats_from_values(getattr(path, "values", path))
    return MartingaleCurve(grid, np.atleast_1d(log_mixture(grid, params, stats)), stats, params)
