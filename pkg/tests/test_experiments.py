import math

import numpy as np
import pytest

from extremalindex.errors import CellEmpty, InvalidVariance
from extremalindex.experiments import (
    BENCHMARK_ESTIMATORS,
    WORKERS_ENV,
    EstimatorSpec,
    ExperimentConfig,
    angle_grid,
    collect_estimates,
    default_workers,
    run_monte_carlo,
    summarize,
    variance_ratio,
)
from extremalindex.oracles import ArchOracle

SMALL = ExperimentConfig(
    process="iid", n=400, replications=12, k_n_grid=(20, 40),
    estimators=(EstimatorSpec("theta1", c=2, a=1), EstimatorSpec("theta2", kappa=1.0)),
    angle_count=3, base_seed=99,
)


def test_angle_grid():
    grid = angle_grid(10)
    assert len(grid) == 10
    for k, (phi, tau) in enumerate(grid, start=1):
        assert phi == k * math.pi / 22
        assert np.all(tau > 0)
        assert abs(np.hypot(*tau) - 1.0) <= 1e-15
    phi11, tau11 = angle_grid(11)[-1]
    assert phi11 == pytest.approx(math.pi / 2)
    assert tau11[0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        angle_grid(0)


def test_variance_ratio():
    assert variance_ratio(0.0, 100, 0.7) == 0.0
    r = variance_ratio(0.01, 100, math.e - 2)
    assert r * (math.e - 2) / 100 == pytest.approx(0.01, rel=1e-15)
    for bad in (0.0, -1.0):
        with pytest.raises(InvalidVariance):
            variance_ratio(0.1, 10, bad)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n=100, k_n_grid=(60,))
    with pytest.raises(ValueError):
        ExperimentConfig(replications=0)
    with pytest.raises(ValueError):
        ExperimentConfig(process="garch")
    with pytest.raises(ValueError):
        EstimatorSpec("theta4")
    assert ExperimentConfig().estimators == BENCHMARK_ESTIMATORS


def test_estimator_labels():
    assert EstimatorSpec("theta1", c=2, a=1).label == "theta1[L2,1]"
    assert EstimatorSpec("theta2", kappa=1.0).label == "theta2[kappa=1]"
    assert EstimatorSpec("theta3").label == "theta3[0.5,1.5;64]"


def test_arch_oracle_selection():
    default = ExperimentConfig(process="arch", process_params={})
    assert default.oracle() == ArchOracle()
    pinned = ExperimentConfig(process="arch", process_params={"theta_components": [0.5, 0.6]})
    assert pinned.oracle().component_indices() == (0.5, 0.6)
    assert pinned.simulator_params().lambda1 == 0.7


def test_summary_identities():
    rows = run_monte_carlo(SMALL, workers=1)
    assert len(rows) == 2 * 2 * 3
    for row in rows:
        assert row.successes + row.failures == SMALL.replications
        assert row.r_n == SMALL.n // row.k_n
        m = row.successes
        assert row.rmse ** 2 == pytest.approx(row.bias ** 2 + row.sample_variance * (m - 1) / m, rel=1e-10)
        assert row.rmse >= abs(row.bias)
        assert row.theta_true == 1.0
        # L2,1 gives M = 1/2 on the i.i.d. process, theta2 at kappa = 1 gives e - 2
        asym = math.e - 2 if row.estimator.startswith("theta2") else 4 * (math.exp(0.5) - 1.5)
        assert row.variance_ratio == pytest.approx(row.k_n * row.sample_variance / asym, rel=1e-12)


def test_deterministic_across_runs_and_workers():
    one = collect_estimates(SMALL, workers=1)
    again = collect_estimates(SMALL, workers=1)
    two = collect_estimates(SMALL, workers=3)
    assert np.array_equal(one, again, equal_nan=True)
    assert np.array_equal(one, two, equal_nan=True)


def test_default_workers_from_environment(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert default_workers() == 1
    monkeypatch.setenv(WORKERS_ENV, "4")
    assert default_workers() == 4


def test_failures_are_counted_and_empty_cells_raise():
    config = ExperimentConfig(
        process="iid", n=200, replications=4, k_n_grid=(10,),
        estimators=(EstimatorSpec("theta2", kappa=15.0),), angle_count=2, base_seed=0,
    )
    estimates = collect_estimates(config, workers=1)
    assert np.all(np.isnan(estimates))
    with pytest.raises(CellEmpty):
        summarize(config, estimates)
    rows = summarize(config, estimates, strict=False)
    assert all(r.successes == 0 and r.failures == 4 and math.isnan(r.mean) for r in rows)


def test_partial_failures_excluded_from_summary():
    estimates = collect_estimates(SMALL, workers=1)
    estimates[:3, 0, 1, 0] = np.nan
    rows = summarize(SMALL, estimates)
    row = next(r for r in rows if r.k_n == 20 and r.estimator == "theta2[kappa=1]" and r.angle_index == 1)
    assert (row.successes, row.failures) == (9, 3)
    assert row.mean == pytest.approx(np.mean(estimates[3:, 0, 1, 0]), rel=1e-15)


@pytest.mark.slow
def test_ar1_bias_shrinks_with_longer_blocks():
    config = ExperimentConfig(
        process="ar1", process_params={"rho1": 0.5, "rho2": 0.5, "alpha": 0.5},
        n=2000, replications=300, k_n_grid=(50, 100, 150, 200),
        estimators=(EstimatorSpec("theta2", kappa=1.0),), angle_count=10, base_seed=3_000_000,
    )
    rows = run_monte_carlo(config, workers=1)
    mean_bias = [np.mean([r.bias for r in rows if r.k_n == k]) for k in config.k_n_grid]
    assert all(a < b for a, b in zip(mean_bias, mean_bias[1:]))

