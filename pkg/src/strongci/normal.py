"""Standard normal quantiles.

Backed by ``scipy.special.ndtri`` (Cephes), whose relative error is at the
level of double rounding over (0, 1); the test suite pins it against
50-digit mpmath references.
"""

import math

from scipy.special import ndtri

from .errors import InvalidConfigError


def upper_quantile(p: float) -> float:
    """The point z with P(N(0,1) > z) = p."""
    if not 0 < p < 1:
        raise InvalidConfigError(f"tail probability must lie in (0, 1), got {p}")
    return -float(ndtri(p))


def two_sided_z(delta: float) -> float:
    """Upper ``delta/2`` quantile, the half-width multiplier of a central interval."""
    return upper_quantile(delta / 2.0)


def _check_level(delta, name="delta"):
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and 0 < delta < 1):
        raise InvalidConfigError(f"{name} must lie in (0, 1), got {delta!r}")
    return float(delta)
