"""Block layout, ranks, order-statistic thresholds and exceedance counting.

Everything here works on the first ``n_used = k_n * r_n`` observations of a
series; the trailing partial block never enters a statistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidDirection,
    InvalidRank,
    InvalidSeries,
    LevelTooDeep,
    SchemeMismatch,
)


@dataclass(frozen=True)
class MultivariateSeries:
    """An ``n x d`` block of finite observations, rows in time order."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidSeries(f"expected a non-empty n x d array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidSeries("series contains NaN or infinite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def column_maxima(self) -> np.ndarray:
        return self.values.max(axis=0)


@dataclass(frozen=True)
class BlockScheme:
    """``k_n`` consecutive blocks of ``r_n`` observations each."""

    k_n: int
    r_n: int

    def __post_init__(self):
        if int(self.k_n) != self.k_n or int(self.r_n) != self.r_n:
            raise SchemeMismatch("k_n and r_n must be integers")
        if self.k_n < 1 or self.r_n < 1:
            raise SchemeMismatch(f"k_n and r_n must be positive, got ({self.k_n}, {self.r_n})")
        object.__setattr__(self, "k_n", int(self.k_n))
        object.__setattr__(self, "r_n", int(self.r_n))

    @property
    def n_used(self) -> int:
        return self.k_n * self.r_n

    @classmethod
    def from_k(cls, n: int, k_n: int) -> "BlockScheme":
        """Scheme with ``k_n`` blocks of length ``floor(n / k_n)``."""
        if k_n < 1 or k_n > n:
            raise SchemeMismatch(f"k_n={k_n} must lie in [1, n={n}]")
        return cls(k_n, n // k_n)

    def check(self, series: MultivariateSeries) -> None:
        if self.n_used > series.n:
            raise SchemeMismatch(
                f"scheme needs {self.n_used} observations, series has {series.n}"
            )

    def block_slices(self):
        return [slice(j * self.r_n, (j + 1) * self.r_n) for j in range(self.k_n)]


def as_series(data) -> MultivariateSeries:
    if isinstance(data, MultivariateSeries):
        return data
    return MultivariateSeries(data)


def as_direction(tau, d: int | None = None) -> np.ndarray:
    """Validate a direction: nonnegative, finite, not identically zero."""
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if tau.ndim != 1:
        raise InvalidDirection("direction must be a vector")
    if d is not None and tau.shape[0] != d:
        raise InvalidDirection(f"direction has {tau.shape[0]} components, series has {d}")
    if not np.all(np.isfinite(tau)) or np.any(tau < 0):
        raise InvalidDirection(f"direction entries must be finite and >= 0, got {tau}")
    if not np.any(tau > 0):
        raise InvalidDirection("direction must have at least one positive entry")
    return tau


def ceil_level(k_n: int, x: float) -> int:
    """``ceil(k_n * x)`` guarded against values like 100 * 0.07 = 7.000000000000001."""
    prod = k_n * x
    nearest = round(prod)
    if nearest > 0 and abs(prod - nearest) <= 1e-9 * abs(prod):
        return int(nearest)
    return int(math.ceil(prod))


def order_statistic_threshold(column, m: int) -> float:
    """Return the ``m``-th largest entry of ``column`` (ties kept)."""
    column = np.asarray(column, dtype=float).ravel()
    if int(m) != m or m < 1 or m > column.shape[0]:
        raise InvalidRank(f"rank m={m} outside [1, {column.shape[0]}]")
    m = int(m)
    pos = column.shape[0] - m
    return float(np.partition(column, pos)[pos])


def estimate_threshold_vector(series, tau, scheme: BlockScheme) -> np.ndarray:
    """Per-component thresholds at level ``tau``; ``+inf`` where ``tau_i == 0``."""
    series = as_series(series)
    scheme.check(series)
    tau = as_direction(tau, series.d)
    used = series.values[: scheme.n_used]
    u = np.full(series.d, np.inf)
    for i in np.flatnonzero(tau > 0):
        m = ceil_level(scheme.k_n, tau[i])
        if m > scheme.n_used:
            raise LevelTooDeep(
                f"component {i}: ceil(k_n * tau) = {m} exceeds n_used = {scheme.n_used}"
            )
        u[i] = order_statistic_threshold(used[:, i], m)
    return u


def exceedance_indicator(series, u) -> np.ndarray:
    """Boolean per observation: does any component strictly exceed its threshold."""
    series = as_series(series)
    u = np.asarray(u, dtype=float)
    return np.any(series.values > u, axis=1)


def block_exceedance_counts(series, u, scheme: BlockScheme) -> np.ndarray:
    """Number of observations per block with at least one component above ``u``."""
    series = as_series(series)
    scheme.check(series)
    u = np.asarray(u, dtype=float)
    if u.shape != (series.d,):
        raise SchemeMismatch(f"threshold vector has shape {u.shape}, expected ({series.d},)")
    hits = np.any(series.values[: scheme.n_used] > u, axis=1)
    return hits.reshape(scheme.k_n, scheme.r_n).sum(axis=1)


def ascending_ranks_min_ties(column) -> np.ndarray:
    """Ranks ``1 + #{m : x_m < x_l}``; tied values share the lowest rank."""
    column = np.asarray(column, dtype=float)
    if column.size == 0:
        raise InvalidSeries("cannot rank an empty column")
    if column.ndim == 1:
        return _min_tie_ranks(column)
    ranks = np.empty(column.shape, dtype=np.int64)
    for i in range(column.shape[1]):
        ranks[:, i] = _min_tie_ranks(column[:, i])
    return ranks


def _min_tie_ranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x)
    ordered = x[order]
    ranks = np.empty(x.shape[0], dtype=np.int64)
    if np.all(ordered[1:] != ordered[:-1]):
        ranks[order] = np.arange(1, x.shape[0] + 1)
    else:
        # first position of each value in sorted order = number of strictly smaller values
        ranks[order] = np.searchsorted(ordered, ordered, side="left") + 1
    return ranks


def pareto_transform(ranks, n_used: int) -> np.ndarray:
    ranks = np.asarray(ranks)
    return n_used / (n_used + 1.0 - ranks)


def pareto_scores(series, scheme: BlockScheme) -> np.ndarray:
    """Rank-based unit-Pareto scores of the first ``n_used`` rows, per column."""
    series = as_series(series)
    scheme.check(series)
    used = series.values[: scheme.n_used]
    return pareto_transform(ascending_ranks_min_ties(used), scheme.n_used)


def z_series(series, tau, scheme: BlockScheme) -> np.ndarray:
    """The univariate series ``max_i tau_i * Y_i`` built from Pareto scores."""
    series = as_series(series)
    tau = as_direction(tau, series.d)
    return np.max(pareto_scores(series, scheme) * tau, axis=1)
