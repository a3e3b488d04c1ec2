"""Block-declustering estimators of the multivariate extremal index function.

Three estimators are provided:

* :func:`theta1` - ratio of ``-log`` (fraction of exceedance-free blocks) to the
  mean block exceedance count, evaluated at ``tau / L(tau)`` for a norm ``L``
  that is positively homogeneous of order one.
* :func:`theta2` - rank/Pareto estimator: exceedances of ``max_i tau_i * Y_i``
  above its own order statistic, scale invariant without any normalization.
* :func:`theta3` - average of the unnormalized ratio along the ray
  ``{kappa * tau0}`` over ``kappa`` in ``[sigma, phi]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllBlocksExceed, EstimatorError, LevelTooDeep, NoExceedances
from .series import (
    BlockScheme,
    as_direction,
    as_series,
    block_exceedance_counts,
    ceil_level,
    estimate_threshold_vector,
    order_statistic_threshold,
    z_series,
)


@dataclass(frozen=True)
class PowerNorm:
    """``L(tau) = c * (sum_i |tau_i|^a)^(1/a)``."""

    c: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and self.a > 0):
            raise ValueError(f"PowerNorm needs c > 0 and a > 0, got c={self.c}, a={self.a}")

    def __call__(self, tau) -> float:
        tau = np.abs(np.asarray(tau, dtype=float))
        if self.a == 1.0:
            return self.c * float(tau.sum())
        # scale by the max entry so large a does not overflow
        top = float(tau.max())
        return self.c * top * float(np.sum((tau / top) ** self.a)) ** (1.0 / self.a)

    @property
    def label(self) -> str:
        return f"L{self.c:g},{self.a:g}"


@dataclass(frozen=True)
class ConstantOneDiagnostic:
    """``L = 1``. Not homogeneous; only meant for coordinate-direction cross-checks."""

    def __call__(self, tau) -> float:
        return 1.0

    @property
    def label(self) -> str:
        return "const1"


HomogeneousNorm = PowerNorm | ConstantOneDiagnostic


def parse_norm(text: str) -> HomogeneousNorm:
    """Parse ``"c,a"`` or ``"const1"`` into a norm."""
    text = text.strip()
    if text.lower() in ("const1", "1", "one"):
        return ConstantOneDiagnostic()
    try:
        c, a = (float(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"norm must be 'c,a' or 'const1', got {text!r}") from None
    return PowerNorm(c, a)


@dataclass(frozen=True)
class EstimatorReport:
    theta_hat: float
    H_hat: float
    neg_log_Htilde_hat: float
    scheme: BlockScheme
    direction: np.ndarray


def block_statistics(counts) -> tuple[float, float]:
    """Fraction of exceedance-free blocks and mean exceedance count per block."""
    counts = np.asarray(counts)
    k_n = counts.shape[0]
    if k_n < 1:
        raise ValueError("need at least one block")
    H_hat = np.count_nonzero(counts == 0) / k_n
    return float(H_hat), float(counts.sum() / k_n)


def _ratio(H_hat: float, mean_count: float, level) -> float:
    if H_hat == 0.0:
        raise AllBlocksExceed("every block contains an exceedance", level=level)
    if mean_count == 0.0:
        raise NoExceedances("no observation exceeds the thresholds", level=level)
    return -math.log(H_hat) / mean_count


def ratio_statistics(series, level, scheme: BlockScheme) -> tuple[float, float]:
    """``(H_hat, mean count)`` with thresholds set at ``level`` (no normalization)."""
    u = estimate_threshold_vector(series, level, scheme)
    return block_statistics(block_exceedance_counts(series, u, scheme))


def theta1(series, tau, scheme: BlockScheme, L: HomogeneousNorm = PowerNorm(1.0, 1.0)) -> EstimatorReport:
    """Homogeneity-normalized ratio estimator evaluated at ``tau / L(tau)``."""
    series = as_series(series)
    tau = as_direction(tau, series.d)
    sigma = tau / L(tau)
    H_hat, mean_count = ratio_statistics(series, sigma, scheme)
    theta = _ratio(H_hat, mean_count, sigma)
    return EstimatorReport(theta, H_hat, mean_count, scheme, tau)


def theta2(series, tau, kappa: float, scheme: BlockScheme) -> EstimatorReport:
    """Rank/Pareto block estimator at exceedance level ``kappa``.

    The threshold is the ``ceil(k_n * kappa)``-th largest value of the
    Pareto-scored series; the estimate is ``-log(fraction of blocks without
    exceedances) / kappa``. ``H_hat`` and ``neg_log_Htilde_hat`` of the report
    refer to the exceedances of that univariate series.
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    series = as_series(series)
    tau = as_direction(tau, series.d)
    z = z_series(series, tau, scheme)
    m = ceil_level(scheme.k_n, kappa)
    if m > scheme.n_used:
        raise LevelTooDeep(f"ceil(k_n * kappa) = {m} exceeds n_used = {scheme.n_used}")
    v_hat = order_statistic_threshold(z, m)
    counts = (z > v_hat).reshape(scheme.k_n, scheme.r_n).sum(axis=1)
    H_hat, mean_count = block_statistics(counts)
    if H_hat == 0.0:
        raise AllBlocksExceed("every block contains an exceedance", level=kappa)
    # + 0.0 folds -0.0 (from -log(1)) into 0.0
    theta = -math.log(H_hat) / kappa + 0.0
    return EstimatorReport(theta, H_hat, mean_count, scheme, tau)


def theta3(series, tau0, sigma: float, phi: float, scheme: BlockScheme, quad_points: int = 64) -> float:
    """Average of the unnormalized block ratio along ``kappa * tau0``, ``kappa`` in ``[sigma, phi]``.

    Uniform-grid trapezoid rule with ``quad_points`` nodes.
    """
    if not 0 < sigma < phi:
        raise ValueError(f"need 0 < sigma < phi, got sigma={sigma}, phi={phi}")
    if quad_points < 2:
        raise ValueError("quad_points must be at least 2")
    series = as_series(series)
    tau0 = as_direction(tau0, series.d)
    grid = np.linspace(sigma, phi, quad_points)
    values = np.empty(quad_points)
    for j, kappa in enumerate(grid):
        try:
            H_hat, mean_count = ratio_statistics(series, kappa * tau0, scheme)
            values[j] = _ratio(H_hat, mean_count, kappa)
        except EstimatorError as err:
            err.level = float(kappa)
            raise
    h = (phi - sigma) / (quad_points - 1)
    integral = h * (values.sum() - 0.5 * (values[0] + values[-1]))
    return float(integral / (phi - sigma))
