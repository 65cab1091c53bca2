"""
Simulation of the scalar AR(1) model

    y_t = alpha * y_{t-1} + eps_t,    t = 1, ..., T,

with a fixed starting value y_0 and i.i.d. innovations eps_t.

Random numbers come from numpy's ``Generator`` on the PCG64 bit generator.
Gaussian draws use ``Generator.standard_normal``, which numpy implements with
the 256-layer ziggurat method. That algorithm is fixed for a given numpy
release, so a seed reproduces a path bit-for-bit. The ziggurat tail branch
calls the C library ``exp``/``log``; those are correctly rounded on every
mainstream libm for the arguments involved, but bit-identity across exotic
platforms is not guaranteed by numpy itself.

Replications are seeded with ``SeedSequence(seed, spawn_key=(i,))``, which is
what ``SeedSequence(seed).spawn(n)[i]`` yields, so replication ``i`` can be
regenerated on its own without drawing replications ``0..i-1`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Protocol

import numpy as np

from .errors import InvalidConfigError, ParseError

MAX_SEED = 2**64 - 1


class InnovationSource(Protocol):
    """Anything that can hand out the next ``n`` innovations."""

    def draw(self, n: int) -> np.ndarray: ...


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidConfigError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def seed_sequence(seed: int, stream: int | None = None) -> np.random.SeedSequence:
    """Seed sequence for ``seed``, or for its ``stream``-th child."""
    seed = _check_seed(seed)
    if stream is None:
        return np.random.SeedSequence(seed)
    if stream < 0:
        raise InvalidConfigError(f"stream index must be nonnegative, got {stream}")
    return np.random.SeedSequence(seed, spawn_key=(int(stream),))


def make_generator(seed: int, stream: int | None = None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, stream)))


class GaussianInnovations:
    """Standard normal innovations from a seeded PCG64 generator."""

    def __init__(self, seed: int = 0, stream: int | None = None):
        self.seed = _check_seed(seed)
        self.stream = stream
        self._rng = make_generator(seed, stream)

    def draw(self, n: int) -> np.ndarray:
        return self._rng.standard_normal(n)

    def __repr__(self):
        return f"GaussianInnovations(seed={self.seed}, stream={self.stream})"


class DegenerateInnovations:
    """Innovation source whose every draw is the same constant."""

    def __init__(self, constant: float):
        self.constant = float(constant)

    def draw(self, n: int) -> np.ndarray:
        return np.full(n, self.constant)

    def __repr__(self):
        return f"DegenerateInnovations({self.constant!r})"


def degenerate_innovations(constant: float) -> DegenerateInnovations:
    return DegenerateInnovations(constant)


def gaussian_innovations(seed: int, stream: int | None = None) -> GaussianInnovations:
    return GaussianInnovations(seed, stream)


@dataclass(frozen=True)
class Ar1Config:
    alpha: float = 0.8
    y0: float = 0.0
    horizon: int = 1000
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.horizon, bool) or not isinstance(self.horizon, (int, np.integer)):
            raise InvalidConfigError(f"horizon must be an integer, got {self.horizon!r}")
        if self.horizon < 1:
            raise InvalidConfigError(f"horizon must be >= 1, got {self.horizon}")
        # alpha may be NaN for observed data of unknown origin
        if math.isinf(self.alpha) or not math.isfinite(self.y0):
            raise InvalidConfigError("alpha and y0 must be finite")
        _check_seed(self.seed)


@dataclass(frozen=True, eq=False)
class Path:
    """A realized trajectory ``y_0, ..., y_T`` together with its config.

    ``values`` is stored as a read-only float64 array of length ``T + 1``.
    """

    values: np.ndarray
    config: Ar1Config

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or len(values) != self.config.horizon + 1:
            raise InvalidConfigError(
                f"path must hold horizon + 1 = {self.config.horizon + 1} values, got shape {values.shape}"
            )
        if values[0] != self.config.y0:
            raise InvalidConfigError("values[0] must equal config.y0")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        return self.config == other.config and np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def observations(self) -> np.ndarray:
        """``y_1, ..., y_T``."""
        return self.values[1:]

    def csv_rows(self):
        for t, y in enumerate(self.values):
            yield t, float(y)


def simulate_path(config: Ar1Config, innovations: InnovationSource | None = None) -> Path:
    """Run the AR(1) recursion for ``config.horizon`` steps.

    Parameters
    ----------
    config : Ar1Config
        Coefficient, starting value, horizon and seed.
    innovations : InnovationSource, optional
        Source of ``eps_1, ..., eps_T``. Defaults to
        ``GaussianInnovations(config.seed)``.

    Returns
    -------
    Path
    """
    if not math.isfinite(config.alpha):
        raise InvalidConfigError(f"cannot simulate with alpha={config.alpha}")
    if innovations is None:
        innovations = GaussianInnovations(config.seed)
    eps = np.asarray(innovations.draw(config.horizon), dtype=np.float64)
    if eps.shape != (config.horizon,):
        raise InvalidConfigError(
            f"innovation source returned shape {eps.shape}, expected ({config.horizon},)"
        )
    return Path(recursion(config.alpha, config.y0, eps), config)


def recursion(alpha, y0, eps):
    """Fold innovations through ``y_t = alpha*y_{t-1} + eps_t``.

    ``eps`` may be 1-d (one path) or 2-d with one row per replication; the
    result has one more column than ``eps``. ``y0`` broadcasts over rows.
    """
    eps = np.asarray(eps, dtype=np.float64)
    out = np.empty(eps.shape[:-1] + (eps.shape[-1] + 1,))
    out[..., 0] = y0
    prev = out[..., 0]
    for t in range(eps.shape[-1]):
        prev = alpha * prev + eps[..., t]
        out[..., t + 1] = prev
    return out


def path_from_values(values: Iterable[float], alpha: float = float("nan"), seed: int = 0) -> Path:
    """Wrap externally supplied data (``values[0]`` is y_0) as a Path.

    The coefficient of observed data is unknown, hence ``alpha`` defaults to
    NaN.
    """
    values = np.asarray(list(values), dtype=np.float64)
    if len(values) < 2:
        raise InvalidConfigError("need y_0 and at least one observation")
    config = Ar1Config(alpha=float(alpha), y0=float(values[0]), horizon=len(values) - 1, seed=seed)
    return Path(values, config)


def read_path_csv(lines: Iterable[str]) -> np.ndarray:
    """Parse ``t,y`` CSV text into the array ``y_0, ..., y_T``.

    Lines starting with ``#`` are provenance comments and are skipped. The
    ``t`` column must count up from 0 without gaps.
    """
    values = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if [c.strip() for c in line.split(",")] != ["t", "y"]:
                raise ParseError(f"expected header 't,y', got {line!r}", lineno)
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", lineno)
        try:
            t = int(parts[0])
            y = float(parts[1])
        except ValueError:
            raise ParseError(f"cannot parse row {line!r}", lineno) from None
        if t != len(values):
            raise ParseError(f"expected t={len(values)}, got t={t}", lineno)
        if not math.isfinite(y):
            raise ParseError(f"non-finite observation {parts[1]!r}", lineno)
        values.append(y)
    if not header_seen:
        raise ParseError("missing header 't,y'")
    if not values:
        raise ParseError("no data rows")
    return np.asarray(values)
