"""
Classical fixed-T ("weak") intervals for the AR(1) coefficient.

Both intervals invert the studentized statistic

    tau = (gamma1/gamma0 - alpha) * sqrt(gamma0).

For |alpha| != 1, tau is asymptotically N(0, 1). At the unit root it
converges instead to

    (W(1)^2 - 1) / (2 * sqrt(int_0^1 W(s)^2 ds))

for a standard Brownian motion W. Its quantiles are estimated here by
simulating W on a uniform grid, so the unit-root interval is only as good as
the simulation that produced its quantiles. Outputs label both intervals
"approximate".
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .ar1_model import _check_seed, make_generator
from .confseq import Interval
from .errors import DegenerateStatisticError, InvalidConfigError, UndefinedEstimateError
from .normal import _check_level, two_sided_z
from .stats_core import GammaStats

WEAK_LABEL = "Weak (approximate)"
STRONG_LABEL = "Strong"

# rows of Brownian paths simulated per block; bounds memory at ~8 * CHUNK * grid_n bytes
CHUNK = 2048


def _require_information(stats):
    if not stats.gamma0 > 0:
        raise UndefinedEstimateError("gamma0 == 0: no information about alpha yet")


def tau_statistic(stats: GammaStats, alpha: float) -> float:
    _require_information(stats)
    return (stats.gamma1 / stats.gamma0 - alpha) * math.sqrt(stats.gamma0)


def weak_interval_normal(stats: GammaStats, delta: float) -> Interval:
    """Central interval from the normal approximation to ``tau``."""
    _require_information(stats)
    delta = _check_level(delta)
    center = stats.gamma1 / stats.gamma0
    hw = two_sided_z(delta) / math.sqrt(stats.gamma0)
    return Interval(center - hw, center + hw)


@dataclass(frozen=True)
class UnitRootQuantiles:
    """Simulated lower/upper ``delta/2`` quantiles of the unit-root law."""

    q_lo: float
    q_hi: float
    delta: float
    reps: int
    grid_n: int
    seed: int

    def __post_init__(self):
        if not self.q_lo < self.q_hi:
            raise InvalidConfigError(f"q_lo={self.q_lo} must be below q_hi={self.q_hi}")

    def to_dict(self):
        return asdict(self)

    def to_json(self, provenance=None) -> str:
        payload = self.to_dict()
        if provenance is not None:
            payload = {"provenance": provenance, **payload}
        return json.dumps(payload, indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "UnitRootQuantiles":
        d = json.loads(text)
        return cls(**{k: d[k] for k in ("q_lo", "q_hi", "delta", "reps", "grid_n", "seed")})


def unit_root_functional(increments: np.ndarray) -> np.ndarray:
    """Evaluate ``(W(1)^2 - 1) / (2 sqrt(int W^2))`` for each row of
    Brownian increments over [0, 1].

    The integral is the left Riemann sum ``sum_{k<n} W(k/n)^2 / n``, the
    continuous analogue of gamma0 (which also sums the lagged values).

    Raises
    ------
    DegenerateStatisticError
        If some path has a zero integral.
    """
    increments = np.atleast_2d(np.asarray(increments, dtype=np.float64))
    n = increments.shape[1]
    w = np.cumsum(increments, axis=1)
    w_end = w[:, -1]
    # W(0) = 0 contributes nothing; lagged values are W(1/n)..W((n-1)/n)
    integral = np.einsum("ij,ij->i", w[:, :-1], w[:, :-1]) / n
    if np.any(integral <= 0):
        raise DegenerateStatisticError(
            f"{int(np.sum(integral <= 0))} simulated path(s) have zero integral of W^2"
        )
    return 0.5 * (w_end * w_end - 1.0) / np.sqrt(integral)


def _gaussian_increments(rng, shape):
    return rng.standard_normal(shape) / math.sqrt(shape[1])


def unit_root_sample(grid_n: int, reps: int, seed: int,
                     increments: Callable | None = None) -> np.ndarray:
    """Draw ``reps`` values of the unit-root statistic on a ``grid_n`` grid.

    ``increments(rng, (rows, grid_n))`` overrides the Brownian increment
    generator (a test hook); by default they are N(0, 1/grid_n).
    """
    if isinstance(grid_n, bool) or not isinstance(grid_n, (int, np.integer)) or grid_n < 2:
        raise InvalidConfigError(f"grid_n must be an integer >= 2, got {grid_n!r}")
    if isinstance(reps, bool) or not isinstance(reps, (int, np.integer)) or reps < 2:
        raise InvalidConfigError(f"reps must be an integer >= 2, got {reps!r}")
    rng = make_generator(_check_seed(seed))
    draw = increments or _gaussian_increments
    out = np.empty(reps)
    for start in range(0, reps, CHUNK):
        rows = min(CHUNK, reps - start)
        out[start:start + rows] = unit_root_functional(draw(rng, (rows, grid_n)))
    return out


def simulate_unit_root_quantiles(delta: float = 0.01, grid_n: int = 1000, reps: int = 100_000,
                                 seed: int = 0, increments: Callable | None = None) -> UnitRootQuantiles:
    """Monte Carlo ``delta/2`` and ``1 - delta/2`` quantiles of the unit-root law."""
    delta = _check_level(delta)
    sample = unit_root_sample(grid_n, reps, seed, increments)
    q_lo, q_hi = np.quantile(sample, [delta / 2.0, 1.0 - delta / 2.0])
    return UnitRootQuantiles(float(q_lo), float(q_hi), delta, int(reps), int(grid_n), int(seed))


def weak_interval_unit_root(stats: GammaStats, quantiles: UnitRootQuantiles) -> Interval:
    """Invert ``q_lo <= tau <= q_hi``; the result is asymmetric about the LS estimate."""
    _require_information(stats)
    center = stats.gamma1 / stats.gamma0
    root = math.sqrt(stats.gamma0)
    return Interval(center - quantiles.q_hi / root, center - quantiles.q_lo / root)
