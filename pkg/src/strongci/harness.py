"""
Monte Carlo experiments: width tables, martingale curves and coverage.

Replication ``i`` of an experiment with ``base_seed`` draws its innovations
from ``GaussianInnovations(base_seed, stream=i)``, so every replication is
reproducible on its own and ``simulate_path`` regenerates exactly the same
path. Replications are processed in row blocks; all streams in a block are
advanced together with the same arithmetic as the scalar code path.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import confseq
from .ar1_model import Ar1Config, GaussianInnovations, simulate_path
from .baselines import (
    STRONG_LABEL,
    WEAK_LABEL,
    UnitRootQuantiles,
    simulate_unit_root_quantiles,
    weak_interval_normal,
    weak_interval_unit_root,
)
from .confseq import strong_halfwidth
from .errors import InvalidConfigError
from .martingale import MartingaleCurve, MixtureParams, _log_mixture, alpha_grid, capital, martingale_curve
from .normal import _check_level, two_sided_z
from .stats_core import BatchAccumulator, stats_from_values

BLOCK = 4096


@dataclass(frozen=True)
class ExperimentConfig:
    alpha_true: float = 0.8
    y0: float = 0.0
    horizon: int = 1000
    a: float = 0.1
    delta: float = 0.01
    replications: int = 500
    base_seed: int = 0
    alpha_grid: tuple[float, float, float] | None = None
    # "auto" picks the unit-root law at alpha_true == 1, the normal law elsewhere
    weak_method: str = "auto"
    unit_root_reps: int = 20_000
    unit_root_grid: int = 1000

    def __post_init__(self):
        Ar1Config(self.alpha_true, self.y0, self.horizon, self.base_seed)
        MixtureParams(self.a)
        _check_level(self.delta)
        if self.replications < 1:
            raise InvalidConfigError(f"replications must be >= 1, got {self.replications}")
        if self.weak_method not in ("auto", "normal", "unit_root"):
            raise InvalidConfigError(f"unknown weak_method {self.weak_method!r}")
        if self.alpha_grid is not None:
            object.__setattr__(self, "alpha_grid", tuple(float(v) for v in self.alpha_grid))
            if len(self.grid()) < 2:
                raise InvalidConfigError("alpha grid must contain at least 2 points")

    @property
    def params(self) -> MixtureParams:
        return MixtureParams(self.a)

    @property
    def resolved_weak_method(self) -> str:
        if self.weak_method != "auto":
            return self.weak_method
        return "unit_root" if self.alpha_true == 1 else "normal"

    def grid_spec(self) -> tuple[float, float, float]:
        """Curve grid; defaults to alpha_true +- 0.3 (stationary) or +- 0.05."""
        if self.alpha_grid is not None:
            return self.alpha_grid
        half = 0.3 if abs(self.alpha_true) < 1 else 0.05
        return (self.alpha_true - half, self.alpha_true + half, half / 100)

    def grid(self) -> np.ndarray:
        return alpha_grid(*self.grid_spec())

    def path_config(self) -> Ar1Config:
        return Ar1Config(self.alpha_true, self.y0, self.horizon, self.base_seed)

    def to_dict(self):
        d = asdict(self)
        d["alpha_grid"] = list(self.grid_spec())
        return d


@dataclass(frozen=True)
class CoverageReport:
    coverage_freq: float
    mean_strong_width: float
    median_strong_width: float
    mean_weak_width: float
    median_weak_width: float
    martingale_mean_at_T: float
    martingale_se_at_T: float
    rejections: int
    replications: int
    config: ExperimentConfig
    weak_method: str = "normal"
    unit_root_quantiles: UnitRootQuantiles | None = field(default=None, compare=False)

    @property
    def coverage_se(self) -> float:
        p = self.coverage_freq
        return math.sqrt(p * (1 - p) / self.replications)

    def to_dict(self):
        d = {k: getattr(self, k) for k in (
            "coverage_freq", "mean_strong_width", "median_strong_width", "mean_weak_width",
            "median_weak_width", "martingale_mean_at_T", "martingale_se_at_T", "rejections",
            "replications", "weak_method",
        )}
        d["config"] = self.config.to_dict()
        if self.unit_root_quantiles is not None:
            d["unit_root_quantiles"] = self.unit_root_quantiles.to_dict()
        return d

    def to_json(self, provenance=None) -> str:
        d = self.to_dict()
        if provenance is not None:
            d = {"provenance": provenance, **d}
        return json.dumps(_json_safe(d), indent=2)


def _json_safe(obj):
    # strict JSON has no NaN; non-finite floats become null
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


@functools.lru_cache(maxsize=16)
def _cached_quantiles(delta, grid_n, reps, seed):
    return simulate_unit_root_quantiles(delta, grid_n, reps, seed)


def unit_root_quantiles_for(config: ExperimentConfig) -> UnitRootQuantiles:
    return _cached_quantiles(config.delta, config.unit_root_grid, config.unit_root_reps, config.base_seed)


def replication_innovations(config: ExperimentConfig, start: int, stop: int) -> np.ndarray:
    eps = np.empty((stop - start, config.horizon))
    for row, i in enumerate(range(start, stop)):
        eps[row] = GaussianInnovations(config.base_seed, stream=i).draw(config.horizon)
    return eps


def replication_path(config: ExperimentConfig, i: int = 0):
    """The path seen by replication ``i``."""
    return simulate_path(config.path_config(), GaussianInnovations(config.base_seed, stream=i))


def _simulate_block(config: ExperimentConfig, start: int, stop: int):
    """Run the confidence sequence on replications ``start..stop-1``.

    Returns per-replication arrays: covered flag, rejected flag, final
    gamma0 and gamma1.
    """
    alpha, a, delta = config.alpha_true, config.a, config.delta
    eps = replication_innovations(config, start, stop)
    rows = stop - start
    prev = np.full(rows, float(config.y0))
    acc = BatchAccumulator(prev)
    covered = np.ones(rows, dtype=bool)
    run_lo = np.full(rows, -np.inf)
    run_hi = np.full(rows, np.inf)
    for t in range(config.horizon):
        y = alpha * prev + eps[:, t]
        acc.push(y)
        g0, g1 = acc.gamma0, acc.gamma1
        hw = strong_halfwidth(g0, a, delta)
        with np.errstate(divide="ignore", invalid="ignore"):
            center = np.where(g0 > 0, g1 / g0, 0.0)
        lo, hi = center - hw, center + hw
        covered &= (lo <= alpha) & (alpha <= hi)
        np.maximum(run_lo, lo, out=run_lo)
        np.minimum(run_hi, hi, out=run_hi)
        prev = y
    return covered, run_lo > run_hi, acc.gamma0.copy(), acc.gamma1.copy()


def _simulate(config: ExperimentConfig):
    parts = [
        _simulate_block(config, s, min(s + BLOCK, config.replications))
        for s in range(0, config.replications, BLOCK)
    ]
    return tuple(np.concatenate(col) for col in zip(*parts))


def _sample_se(x):
    return float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.nan


def _report(config: ExperimentConfig, with_weak: bool) -> CoverageReport:
    covered, rejected, g0, g1 = _simulate(config)
    strong = 2.0 * np.asarray(strong_halfwidth(g0, config.a, config.delta))
    method = config.resolved_weak_method
    quantiles = None
    weak = np.full(len(g0), np.nan)
    informative = g0 > 0
    if with_weak and np.any(informative):
        if method == "unit_root":
            quantiles = unit_root_quantiles_for(config)
            spread = quantiles.q_hi - quantiles.q_lo
        else:
            spread = 2.0 * two_sided_z(config.delta)
        weak[informative] = spread / np.sqrt(g0[informative])
    s_final = capital(_log_mixture(config.alpha_true, config.a, g0, g1))
    finite_strong = strong[np.isfinite(strong)]
    return CoverageReport(
        coverage_freq=float(np.mean(covered)),
        mean_strong_width=float(np.mean(strong)),
        median_strong_width=float(np.median(strong)) if len(finite_strong) else math.inf,
        mean_weak_width=float(np.nanmean(weak)) if np.any(~np.isnan(weak)) else math.nan,
        median_weak_width=float(np.nanmedian(weak)) if np.any(~np.isnan(weak)) else math.nan,
        martingale_mean_at_T=float(np.mean(s_final)),
        martingale_se_at_T=_sample_se(s_final),
        rejections=int(np.sum(rejected)),
        replications=config.replications,
        config=config,
        weak_method=method if with_weak else "none",
        unit_root_quantiles=quantiles,
    )


def run_table_experiment(config: ExperimentConfig) -> CoverageReport:
    """Strong and weak widths at the final time, aggregated over replications."""
    return _report(config, with_weak=True)


def run_coverage_experiment(config: ExperimentConfig) -> CoverageReport:
    """Frequency with which alpha_true stays in every interval up to the horizon,
    plus the sample mean of the final mixture capital at alpha_true.

    Weak-interval widths are not computed here and are reported as NaN.
    """
    return _report(config, with_weak=False)


def run_figure_curve(config: ExperimentConfig) -> MartingaleCurve:
    """Final capital over the alpha grid for replication 0's path."""
    return martingale_curve(replication_path(config, 0), config.params, config.grid())


@dataclass(frozen=True)
class TableRow:
    interval_type: str
    lower: float
    upper: float
    width: float


def single_path_table(config: ExperimentConfig, path=None) -> list[TableRow]:
    """Weak and strong intervals at the final time of one path.

    Defaults to replication 0, the same data the curve is drawn from.
    """
    if path is None:
        path = replication_path(config, 0)
    stats = stats_from_values(getattr(path, "values", path))
    if config.resolved_weak_method == "unit_root":
        weak = weak_interval_unit_root(stats, unit_root_quantiles_for(config))
    else:
        weak = weak_interval_normal(stats, config.delta)
    strong = confseq.strong_interval(stats, config.params, config.delta)
    return [TableRow(label, iv.lower, iv.upper, iv.width)
            for label, iv in ((WEAK_LABEL, weak), (STRONG_LABEL, strong))]


def width_rate_slope(alpha_true=0.8, horizons=(250, 1000, 4000, 16000), replications=500,
                     a=0.1, delta=0.01, base_seed=0):
    """Least-squares slope of log(mean strong width) against log(T)."""
    widths = []
    for T in horizons:
        cfg = ExperimentConfig(alpha_true=alpha_true, horizon=T, a=a, delta=delta,
                               replications=replications, base_seed=base_seed)
        widths.append(run_coverage_experiment(cfg).mean_strong_width)
    slope = np.polyfit(np.log(horizons), np.log(widths), 1)[0]
    return float(slope), widths


__all__ = [
    "ExperimentConfig", "CoverageReport", "TableRow", "run_table_experiment",
    "run_coverage_experiment", "run_figure_curve", "single_path_table",
    "width_rate_slope", "replication_path", "unit_root_quantiles_for",
]
