"""
Strong confidence intervals and their running intersection.

At every step the interval is the closed sublevel set
``{alpha : log S_t^alpha <= log(1/delta)}`` of the mixture martingale, i.e.

    |alpha - gamma1/gamma0| <= sqrt((a^2 gamma0 + 1) / (a^2 gamma0^2) * log((a^2 gamma0 + 1) / delta^2)).

Ville's inequality makes the true coefficient stay inside every one of these
intervals, hence inside their intersection, with probability >= 1 - delta.
An empty intersection therefore rejects the AR(1) model itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import InvalidConfigError, RejectedModelError
from .martingale import MixtureParams
from .normal import _check_level, two_sided_z
from .stats_core import GammaStats, init_stats, update

DEFAULT_DELTA = 0.01

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Closed real interval, possibly unbounded, or the empty set."""

    lower: float = -INF
    upper: float = INF
    empty: bool = False

    def __post_init__(self):
        if not self.empty and not self.lower <= self.upper:
            raise InvalidConfigError(f"lower {self.lower} exceeds upper {self.upper}")

    @classmethod
    def everything(cls):
        return cls(-INF, INF)

    @classmethod
    def nothing(cls):
        return cls(math.nan, math.nan, True)

    @property
    def bounded(self) -> bool:
        return not self.empty and math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def width(self) -> float:
        if self.empty:
            return 0.0
        return self.upper - self.lower

    @property
    def center(self) -> float:
        if not self.bounded:
            return math.nan
        return (self.lower + self.upper) / 2.0

    def __contains__(self, x) -> bool:
        return not self.empty and self.lower <= x <= self.upper

    def issubset(self, other: "Interval") -> bool:
        if self.empty:
            return True
        return not other.empty and other.lower <= self.lower and self.upper <= other.upper

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        if self.empty or other.empty:
            return self.empty and other.empty
        return self.lower == other.lower and self.upper == other.upper

    def __hash__(self):
        return hash(("empty",)) if self.empty else hash((self.lower, self.upper))


def intersect(a: Interval, b: Interval) -> Interval:
    if a.empty or b.empty:
        return Interval.nothing()
    lo, hi = max(a.lower, b.lower), min(a.upper, b.upper)
    if lo > hi:
        return Interval.nothing()
    return Interval(lo, hi)


def strong_halfwidth(gamma0, a, delta):
    """Half-width of the strong interval; vectorizes over ``gamma0``.

    Returns +inf where ``gamma0 == 0``.
    """
    gamma0 = np.asarray(gamma0, dtype=np.float64)
    a2g0 = a * a * gamma0
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = (1.0 + 1.0 / a2g0) / gamma0
        hw = np.sqrt(factor * (np.log1p(a2g0) - 2.0 * math.log(delta)))
    hw = np.where(gamma0 > 0, hw, INF)
    return float(hw) if hw.ndim == 0 else hw


def strong_interval(stats: GammaStats, params: MixtureParams, delta: float = DEFAULT_DELTA) -> Interval:
    """The closed level-(1 - delta) strong interval for the current statistics."""
    delta = _check_level(delta)
    if stats.gamma0 == 0:
        return Interval.everything()
    center = stats.gamma1 / stats.gamma0
    hw = strong_halfwidth(stats.gamma0, params.a, delta)
    return Interval(center - hw, center + hw)


@dataclass(frozen=True)
class ConfSeqState:
    stats: GammaStats
    params: MixtureParams = MixtureParams()
    delta: float = DEFAULT_DELTA
    current: Interval = Interval.everything()
    running: Interval = Interval.everything()

    def __post_init__(self):
        _check_level(self.delta)

    @property
    def rejected(self) -> bool:
        return self.running.empty

    @property
    def t(self) -> int:
        return self.stats.t


def start(y0: float, params: MixtureParams | None = None, delta: float = DEFAULT_DELTA) -> ConfSeqState:
    """State before any observation after y_0: both intervals unbounded."""
    return ConfSeqState(init_stats(y0), params or MixtureParams(), _check_level(delta))


def step(state: ConfSeqState, y: float) -> ConfSeqState:
    stats = update(state.stats, y)
    current = strong_interval(stats, state.params, state.delta)
    running = intersect(state.running, current)
    return ConfSeqState(stats, state.params, state.delta, current, running)


def prediction_interval(running: Interval, y_t: float, delta_pred: float) -> Interval:
    """Union over alpha in ``running`` of the central ``1 - delta_pred``
    interval for the next observation ``alpha * y_t + eps``.

    The per-alpha level is a separate budget; no joint guarantee with the
    confidence sequence is claimed.
    """
    delta_pred = _check_level(delta_pred, "delta_pred")
    if running.empty:
        raise RejectedModelError("running intersection is empty; the model has been rejected")
    z = two_sided_z(delta_pred)
    if y_t == 0:
        return Interval(-z, z)
    ends = (running.lower * y_t, running.upper * y_t)
    return Interval(min(ends) - z, max(ends) + z)


class StreamRow(NamedTuple):
    t: int
    y: float
    gamma0: float
    gamma1: float
    center: float
    lower: float
    upper: float
    run_lower: float
    run_upper: float
    rejected: bool


STREAM_HEADER = StreamRow._fields


def row_of(state: ConfSeqState) -> StreamRow:
    s = state.stats
    center = s.gamma1 / s.gamma0 if s.gamma0 > 0 else math.nan
    run = state.running
    return StreamRow(
        s.t, s.last_y, s.gamma0, s.gamma1, center,
        state.current.lower, state.current.upper,
        math.nan if run.empty else run.lower, math.nan if run.empty else run.upper,
        run.empty,
    )


def run(values: Iterable[float], params: MixtureParams | None = None,
        delta: float = DEFAULT_DELTA) -> Iterator[ConfSeqState]:
    """Yield the state after each observation of ``y_0, y_1, ...``."""
    it = iter(values)
    try:
        y0 = next(it)
    except StopIteration:
        raise InvalidConfigError("need at least y_0") from None
    state = start(y0, params, delta)
    for y in it:
        state = step(state, y)
        yield state


def final_state(values, params=None, delta=DEFAULT_DELTA) -> ConfSeqState:
    state = None
    for state in run(values, params, delta):
        pass
    if state is None:
        raise InvalidConfigError("need at least one observation after y_0")
    return state
