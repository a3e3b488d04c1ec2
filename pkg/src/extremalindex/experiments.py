"""Monte Carlo study of the estimators on the benchmark processes.

One replication simulates a series with seed ``base_seed + rep`` and evaluates
every (k_n, estimator, angle) cell on it. Summaries are computed from the full
collected array after all replications finish, so results do not depend on
how replications were spread over workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CellEmpty, EstimatorError, InvalidVariance, LevelTooDeep
from .estimators import PowerNorm, theta1, theta2, theta3
from .oracles import ARCH_THETA_DEFAULTS, Ar1Oracle, ArchOracle, IidExpOracle, mc_theta_component_arch
from .series import BlockScheme
from .simulators import Ar1Params, ArchParams, simulate

WORKERS_ENV = "EXTREMALINDEX_WORKERS"


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator column of the study: ``kind`` is theta1, theta2 or theta3."""

    kind: str
    c: float = 1.0
    a: float = 1.0
    kappa: float = 1.0
    sigma: float = 0.5
    phi: float = 1.5
    quad_points: int = 64

    def __post_init__(self):
        if self.kind not in ("theta1", "theta2", "theta3"):
            raise ValueError(f"unknown estimator kind {self.kind!r}")

    @property
    def norm(self):
        return PowerNorm(self.c, self.a)

    @property
    def label(self) -> str:
        if self.kind == "theta1":
            return f"theta1[L{self.c:g},{self.a:g}]"
        if self.kind == "theta2":
            return f"theta2[kappa={self.kappa:g}]"
        return f"theta3[{self.sigma:g},{self.phi:g};{self.quad_points}]"

    def estimate(self, series, tau, scheme: BlockScheme) -> float:
        if self.kind == "theta1":
            return theta1(series, tau, scheme, self.norm).theta_hat
        if self.kind == "theta2":
            return theta2(series, tau, self.kappa, scheme).theta_hat
        return theta3(series, tau, self.sigma, self.phi, scheme, self.quad_points)


BENCHMARK_ESTIMATORS = (
    EstimatorSpec("theta1", c=2, a=1),
    EstimatorSpec("theta1", c=1, a=1),
    EstimatorSpec("theta1", c=2, a=2),
    EstimatorSpec("theta1", c=1, a=2),
    EstimatorSpec("theta2", kappa=1.0),
)


@dataclass(frozen=True)
class ExperimentConfig:
    process: str = "iid"
    process_params: dict = field(default_factory=dict)
    n: int = 2000
    replications: int = 500
    k_n_grid: tuple = (50, 100, 150, 200)
    estimators: tuple = BENCHMARK_ESTIMATORS
    angle_count: int = 10
    base_seed: int = 0

    def __post_init__(self):
        if self.process not in ("iid", "arch", "ar1"):
            raise ValueError(f"unknown process {self.process!r}")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.angle_count < 1:
            raise ValueError("angle_count must be at least 1")
        for k_n in self.k_n_grid:
            if not 1 <= k_n <= self.n or self.n // k_n < 2:
                raise ValueError(f"k_n={k_n} needs k_n <= n and floor(n / k_n) >= 2 (n={self.n})")
        object.__setattr__(self, "k_n_grid", tuple(int(k) for k in self.k_n_grid))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    def simulator_params(self):
        params = {k: v for k, v in self.process_params.items() if k != "theta_components"}
        if self.process == "arch":
            return ArchParams(**params)
        if self.process == "ar1":
            return Ar1Params(**params)
        if params:
            raise ValueError(f"the iid process takes no parameters, got {sorted(params)}")
        return None

    def oracle(self):
        if self.process == "iid":
            return IidExpOracle()
        params = self.simulator_params()
        if self.process == "ar1":
            return Ar1Oracle(params.rho1, params.rho2, params.alpha)
        comps = self.process_params.get("theta_components")
        if comps is None:
            if (params.lambda1, params.lambda2) == (0.7, 0.3):
                comps = ARCH_THETA_DEFAULTS
            else:
                comps = [mc_theta_component_arch(lam, seed=0) for lam in (params.lambda1, params.lambda2)]
        return ArchOracle(*comps)


@dataclass(frozen=True)
class ResultRow:
    process: str
    estimator: str
    k_n: int
    r_n: int
    angle_index: int
    phi: float
    tau: tuple
    theta_true: float
    mean: float
    bias: float
    rmse: float
    sample_variance: float
    variance_ratio: float | None
    successes: int
    failures: int


def angle_grid(count: int = 10):
    """Directions ``(cos phi_k, sin phi_k)`` with ``phi_k = k pi / 22``, ``k = 1..count``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out = []
    for k in range(1, count + 1):
        phi = k * math.pi / 22.0
        out.append((phi, np.array([math.cos(phi), math.sin(phi)])))
    return out


def variance_ratio(sample_variance: float, k_n: int, asym_var: float) -> float:
    """``k_n * sample_variance / asym_var``."""
    if not asym_var > 0:
        raise InvalidVariance(f"asymptotic variance must be positive, got {asym_var}")
    return k_n * sample_variance / asym_var


def replicate(config: ExperimentConfig, rep: int) -> np.ndarray:
    """Estimates of one replication, shape ``(k_n, estimator, angle)``.

    NaN marks a failed cell: degenerate block statistics or a level deeper
    than the series allows.
    """
    series = simulate(config.process, config.n, config.simulator_params(), config.base_seed + rep)
    angles = angle_grid(config.angle_count)
    out = np.full((len(config.k_n_grid), len(config.estimators), len(angles)), np.nan)
    for a, k_n in enumerate(config.k_n_grid):
        scheme = BlockScheme.from_k(config.n, k_n)
        for b, spec in enumerate(config.estimators):
            for c, (_, tau) in enumerate(angles):
                try:
                    out[a, b, c] = spec.estimate(series, tau, scheme)
                except (EstimatorError, LevelTooDeep):
                    pass
    return out


def _replicate_chunk(args):
    config, reps = args
    return np.stack([replicate(config, rep) for rep in reps])


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    return max(1, int(value)) if value else 1


def collect_estimates(config: ExperimentConfig, workers: int | None = None) -> np.ndarray:
    """All estimates, shape ``(replications, k_n, estimator, angle)``."""
    workers = default_workers() if workers is None else max(1, int(workers))
    reps = list(range(config.replications))
    if workers == 1:
        return _replicate_chunk((config, reps))
    chunks = [reps[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_replicate_chunk, [(config, chunk) for chunk in chunks]))
    out = np.empty((config.replications,) + parts[0].shape[1:])
    for chunk, part in zip(chunks, parts):
        out[chunk] = part
    return out


def summarize(config: ExperimentConfig, estimates: np.ndarray, strict: bool = True) -> list[ResultRow]:
    oracle = config.oracle()
    angles = angle_grid(config.angle_count)
    truths = [oracle.theta(tau) for _, tau in angles]
    rows = []
    for a, k_n in enumerate(config.k_n_grid):
        r_n = config.n // k_n
        for b, spec in enumerate(config.estimators):
            for c, (phi, tau) in enumerate(angles):
                sample = estimates[:, a, b, c]
                ok = sample[~np.isnan(sample)]
                failures = sample.shape[0] - ok.shape[0]
                if ok.shape[0] == 0:
                    if strict:
                        raise CellEmpty(
                            f"all {failures} replications failed for {spec.label}, "
                            f"k_n={k_n}, angle {c + 1}"
                        )
                    mean = bias = rmse = var = math.nan
                else:
                    mean = float(ok.mean())
                    bias = mean - truths[c]
                    rmse = float(np.sqrt(np.mean((ok - truths[c]) ** 2)))
                    var = float(ok.var(ddof=1)) if ok.shape[0] > 1 else math.nan
                ratio = None
                asym = oracle.asym_var(spec.kind, tau, spec.norm, spec.kappa)
                if asym is not None and not math.isnan(var):
                    ratio = variance_ratio(var, k_n, asym)
                rows.append(ResultRow(
                    config.process, spec.label, k_n, r_n, c + 1, phi, tuple(float(t) for t in tau),
                    truths[c], mean, bias, rmse, var, ratio, int(ok.shape[0]), int(failures),
                ))
    return rows


def run_monte_carlo(config: ExperimentConfig, workers: int | None = None, strict: bool = True) -> list[ResultRow]:
    """Simulate, estimate every cell, and summarize against the oracle."""
    return summarize(config, collect_estimates(config, workers), strict=strict)
