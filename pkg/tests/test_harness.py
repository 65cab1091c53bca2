import json
import math

import numpy as np
import pytest

from strongci import confseq
from strongci.errors import InvalidConfigError
from strongci.harness import (
    ExperimentConfig,
    replication_path,
    run_coverage_experiment,
    run_figure_curve,
    run_table_experiment,
    single_path_table,
)
from strongci.martingale import capital, log_mixture
from strongci.stats_core import stats_from_values


def test_config_validation():
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(replications=0)
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(delta=1.0)
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(a=0.0)
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(alpha_grid=(0.5, 0.5, 0.1))
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(weak_method="bootstrap")


def test_weak_method_resolution():
    assert ExperimentConfig(alpha_true=1.0).resolved_weak_method == "unit_root"
    assert ExperimentConfig(alpha_true=0.8).resolved_weak_method == "normal"
    assert ExperimentConfig(alpha_true=1.02).resolved_weak_method == "normal"


def test_vectorized_engine_agrees_with_scalar_stream():
    cfg = ExperimentConfig(alpha_true=0.8, horizon=300, delta=0.2, replications=40, base_seed=9)
    report = run_coverage_experiment(cfg)
    covered, s_final, widths = [], [], []
    for i in range(cfg.replications):
        path = replication_path(cfg, i)
        states = list(confseq.run(path.values, cfg.params, cfg.delta))
        covered.append(all(0.8 in s.current for s in states))
        s_final.append(capital(log_mixture(0.8, cfg.params, states[-1].stats)))
        widths.append(states[-1].current.width)
    assert report.coverage_freq == np.mean(covered)
    assert report.martingale_mean_at_T == pytest.approx(np.mean(s_final), rel=1e-12)
    assert report.mean_strong_width == pytest.approx(np.mean(widths), rel=1e-12)


def test_determinism():
    cfg = ExperimentConfig(alpha_true=0.5, horizon=100, replications=300, base_seed=4)
    assert run_table_experiment(cfg) == run_table_experiment(cfg)
    other = ExperimentConfig(alpha_true=0.5, horizon=100, replications=300, base_seed=5)
    assert run_table_experiment(other) != run_table_experiment(cfg)


def test_block_boundaries_do_not_matter(monkeypatch):
    import strongci.harness as h

    cfg = ExperimentConfig(horizon=60, replications=50, base_seed=2)
    whole = run_coverage_experiment(cfg)
    monkeypatch.setattr(h, "BLOCK", 7)
    assert run_coverage_experiment(cfg) == whole


def test_report_invariants_and_json():
    report = run_table_experiment(ExperimentConfig(horizon=200, replications=100))
    assert 0 <= report.coverage_freq <= 1
    assert report.mean_strong_width > report.mean_weak_width > 0
    d = json.loads(report.to_json({"command": "test"}))
    assert d["provenance"]["command"] == "test"
    assert d["config"]["horizon"] == 200


def test_coverage_report_has_no_weak_widths():
    report = run_coverage_experiment(ExperimentConfig(horizon=50, replications=20))
    assert math.isnan(report.mean_weak_width)
    assert json.loads(report.to_json())["mean_weak_width"] is None


def test_single_replication_uninformative_start():
    report = run_table_experiment(ExperimentConfig(horizon=1, replications=3))
    assert report.mean_strong_width == math.inf
    assert report.coverage_freq == 1.0


def test_curve_minimum_at_grid_point_nearest_estimate():
    cfg = ExperimentConfig(alpha_true=0.8, horizon=1000, alpha_grid=(0.5, 1.1, 0.01))
    curve = run_figure_curve(cfg)
    stats = stats_from_values(replication_path(cfg, 0).values)
    est = stats.gamma1 / stats.gamma0
    nearest = curve.alpha[np.argmin(np.abs(curve.alpha - est))]
    assert curve.argmin == nearest
    i = int(np.argmin(curve.log_s))
    assert np.all(np.diff(curve.log_s[: i + 1]) < 0)
    assert np.all(np.diff(curve.log_s[i:]) > 0)


def test_default_unit_root_grid_is_narrow():
    lo, hi, step = ExperimentConfig(alpha_true=1.0).grid_spec()
    assert (lo, hi) == pytest.approx((0.95, 1.05)) and step == pytest.approx(5e-4)


def test_curve_value_at_truth_below_threshold_mostly():
    delta, hits = 0.05, 0
    for seed in range(200):
        cfg = ExperimentConfig(alpha_true=0.8, horizon=200, delta=delta, base_seed=seed,
                               alpha_grid=(0.7, 0.9, 0.1))
        curve = run_figure_curve(cfg)
        hits += curve.log_s[1] < math.log(1 / delta)
    # Ville: P(log S_T >= log(1/delta)) <= delta; allow 3 binomial SEs
    assert 1 - hits / 200 <= delta + 3 * math.sqrt(delta * (1 - delta) / 200)


def test_single_path_table_rows():
    rows = single_path_table(ExperimentConfig(alpha_true=0.8))
    assert [r.interval_type for r in rows] == ["Weak (approximate)", "Strong"]
    weak, strong = rows
    assert strong.lower < weak.lower < weak.upper < strong.upper
    assert weak.width == pytest.approx(weak.upper - weak.lower)


def test_unit_root_table_is_asymmetric():
    cfg = ExperimentConfig(alpha_true=1.0, unit_root_reps=5000)
    weak, _ = single_path_table(cfg)
    stats = stats_from_values(replication_path(cfg, 0).values)
    est = stats.gamma1 / stats.gamma0
    assert est - weak.lower < weak.upper - est


@pytest.mark.parametrize("alpha", [-0.9, 0.0, 0.8, 1.0, 1.02])
def test_coverage_across_regimes(alpha):
    delta, reps = 0.05, 1000
    report = run_coverage_experiment(ExperimentConfig(alpha_true=alpha, horizon=200, delta=delta,
                                                      replications=reps, base_seed=17))
    assert 1 - report.coverage_freq <= delta + 3 * math.sqrt(delta * (1 - delta) / reps)


def test_loose_budget_coverage():
    delta, reps = 0.5, 2000
    report = run_coverage_experiment(ExperimentConfig(alpha_true=0.8, horizon=200, delta=delta,
                                                      replications=reps, base_seed=3))
    assert report.coverage_freq >= 1 - delta - 3 * math.sqrt(delta * (1 - delta) / reps)
