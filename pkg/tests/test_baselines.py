import math

import numpy as np
import pytest
from scipy import stats as sps

from oracles import normal_quantile_mp
from strongci.ar1_model import GaussianInnovations, recursion
from strongci.baselines import (
    UnitRootQuantiles,
    simulate_unit_root_quantiles,
    tau_statistic,
    unit_root_functional,
    unit_root_sample,
    weak_interval_normal,
    weak_interval_unit_root,
)
from strongci.confseq import strong_halfwidth, strong_interval
from strongci.errors import DegenerateStatisticError, InvalidConfigError, UndefinedEstimateError
from strongci.martingale import MixtureParams
from strongci.normal import two_sided_z, upper_quantile
from strongci.stats_core import GammaStats, init_stats


@pytest.mark.parametrize("p", [0.5, 0.1, 0.025, 0.005, 0.0005, 1e-6, 1e-10, 0.9])
def test_normal_quantile_against_mpmath(p):
    assert upper_quantile(p) == pytest.approx(normal_quantile_mp(p), abs=1e-9, rel=1e-14)


def test_normal_quantile_domain():
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(InvalidConfigError):
            upper_quantile(bad)


def test_tau_examples():
    assert tau_statistic(GammaStats(4.0, 2.0), 0.0) == 1.0
    s = GammaStats(7.0, 3.0)
    assert tau_statistic(s, 3.0 / 7.0) == 0.0
    with pytest.raises(UndefinedEstimateError):
        tau_statistic(init_stats(0.0), 0.5)


def test_tau_asymptotically_normal_when_stationary():
    n, T = 2000, 10_000
    eps = np.vstack([GaussianInnovations(31, stream=i).draw(T) for i in range(n)])
    y = recursion(0.8, 0.0, eps)
    g0 = np.sum(y[:, :-1] ** 2, axis=1)
    g1 = np.sum(y[:, :-1] * y[:, 1:], axis=1)
    tau = (g1 / g0 - 0.8) * np.sqrt(g0)
    # SEs of sample skewness and kurtosis under normality: sqrt(6/n), sqrt(24/n)
    assert abs(sps.skew(tau)) < 4 * math.sqrt(6 / n)
    assert abs(sps.kurtosis(tau, fisher=False) - 3) < 4 * math.sqrt(24 / n)
    assert abs(np.std(tau) - 1) < 0.05


def test_weak_normal_halfwidth():
    iv = weak_interval_normal(GammaStats(10_000.0, 5_000.0), 0.01)
    z = normal_quantile_mp(0.005)
    assert iv.center == 0.5
    assert (iv.upper - iv.lower) / 2 == pytest.approx(z / 100, rel=1e-13)


def test_weak_normal_shrinks_as_delta_to_one():
    widths = [weak_interval_normal(GammaStats(1.0, 0.0), d).width for d in (0.5, 0.9, 0.999, 1 - 1e-12)]
    assert widths == sorted(widths, reverse=True)
    assert widths[-1] < 1e-11


def test_weak_normal_undefined():
    with pytest.raises(UndefinedEstimateError):
        weak_interval_normal(init_stats(1.0), 0.01)


def test_unit_root_interval_symmetric_reduction():
    s = GammaStats(400.0, 390.0)
    z = two_sided_z(0.01)
    q = UnitRootQuantiles(-z, z, 0.01, 10, 10, 0)
    iv_u, iv_n = weak_interval_unit_root(s, q), weak_interval_normal(s, 0.01)
    assert (iv_u.lower, iv_u.upper) == pytest.approx((iv_n.lower, iv_n.upper), abs=1e-15)


def test_unit_root_interval_asymmetric_contains_estimate():
    s = GammaStats(2500.0, 2450.0)
    q = UnitRootQuantiles(-2.9, 2.0, 0.01, 10, 10, 0)
    iv = weak_interval_unit_root(s, q)
    assert iv.lower == pytest.approx(0.98 - 2.0 / 50)
    assert iv.upper == pytest.approx(0.98 + 2.9 / 50)
    assert 0.98 in iv


def test_quantiles_invariant():
    with pytest.raises(InvalidConfigError):
        UnitRootQuantiles(1.0, -1.0, 0.01, 10, 10, 0)


def test_functional_single_path():
    # increments (1, 1) on a 2-step grid: W = (1, 2), integral = 1^2 / 2
    assert unit_root_functional(np.array([[1.0, 1.0]]))[0] == pytest.approx(0.5 * 3 / math.sqrt(0.5))


def test_degenerate_brownian_path_raises():
    zero = lambda rng, shape: np.zeros(shape)
    with pytest.raises(DegenerateStatisticError):
        simulate_unit_root_quantiles(0.01, 1000, 100, 0, increments=zero)


@pytest.mark.parametrize("kwargs", [
    {"grid_n": 1}, {"reps": 1}, {"delta": 0.0}, {"seed": -3}, {"grid_n": 10.5},
])
def test_quantile_parameter_validation(kwargs):
    base = {"delta": 0.01, "grid_n": 100, "reps": 100, "seed": 0}
    base.update(kwargs)
    with pytest.raises(InvalidConfigError):
        simulate_unit_root_quantiles(**base)


@pytest.fixture(scope="module")
def moderate_sample():
    return unit_root_sample(1000, 20_000, seed=5)


def test_unit_root_law_left_skewed(moderate_sample):
    assert np.median(moderate_sample) < 0
    q_lo, q_hi = np.quantile(moderate_sample, [0.005, 0.995])
    assert abs(q_lo) > abs(q_hi)


def test_unit_root_law_known_5pct_point(moderate_sample):
    # the no-constant Dickey-Fuller t limit has its 5% point near -1.95
    assert np.quantile(moderate_sample, 0.05) == pytest.approx(-1.95, abs=0.06)


def test_quantiles_reproducible_and_json_roundtrip():
    a = simulate_unit_root_quantiles(0.05, 200, 3000, 11)
    b = simulate_unit_root_quantiles(0.05, 200, 3000, 11)
    assert a == b
    assert UnitRootQuantiles.from_json(a.to_json({"x": 1})) == a
    assert simulate_unit_root_quantiles(0.05, 200, 3000, 12) != a


def test_halfwidth_decomposition_sweep():
    for g0 in np.logspace(-3, 9, 49):
        for a in (1e-3, 0.1, 1.0, 10.0):
            for delta in (1e-6, 0.01, 0.05, 0.5):
                hw = strong_halfwidth(g0, a, delta)
                scale = math.sqrt((a * a * g0 + 1) / (a * a * g0 * g0))
                rhs = math.sqrt(2 * math.log(1 / delta) + math.log(a * a * g0 + 1))
                assert abs(hw / scale - rhs) < 1e-12


def test_strong_wider_than_weak_sweep():
    for g0 in np.logspace(-3, 9, 49):
        for a in (1e-3, 0.1, 1.0, 10.0):
            for delta in (1e-6, 0.01, 0.05, 0.2, 0.5):
                s = GammaStats(float(g0), 0.3 * g0)
                assert strong_interval(s, MixtureParams(a), delta).width > weak_interval_normal(s, delta).width
