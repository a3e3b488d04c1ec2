"""Seeded generators for the three bivariate benchmark processes.

All generators draw from ``numpy.random.Generator(PCG64(seed))`` so that a
given ``(n, params, seed)`` yields bit-identical output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .oracles import ARCH_LAMBDA_MAX
from .series import MultivariateSeries

RNG_IDENTITY = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class ArchParams:
    eta1: float = 2e-5
    eta2: float = 2e-5
    lambda1: float = 0.7
    lambda2: float = 0.3
    burnin: int = 1000

    def __post_init__(self):
        if not (self.eta1 > 0 and self.eta2 > 0):
            raise ValueError("eta values must be positive")
        for lam in (self.lambda1, self.lambda2):
            if not 0 <= lam < ARCH_LAMBDA_MAX:
                raise ValueError(f"lambda={lam} outside [0, 2 exp(gamma))")
        if self.burnin < 0:
            raise ValueError("burnin must be nonnegative")


def default_ar1_burnin(rho1: float, rho2: float) -> int:
    rho = max(rho1, rho2)
    return max(1000, math.ceil(math.log(1e-12) / math.log(rho)))


@dataclass(frozen=True)
class Ar1Params:
    rho1: float = 0.5
    rho2: float = 0.5
    alpha: float = 0.5
    burnin: int | None = None

    def __post_init__(self):
        if not (0 < self.rho1 < 1 and 0 < self.rho2 < 1):
            raise ValueError(f"rho values must lie in (0, 1), got ({self.rho1}, {self.rho2})")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.burnin is None:
            object.__setattr__(self, "burnin", default_ar1_burnin(self.rho1, self.rho2))
        if self.burnin < 0:
            raise ValueError("burnin must be nonnegative")


def simulate_iid_exp(n: int, seed: int) -> MultivariateSeries:
    """Two independent columns of i.i.d. standard exponentials."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = make_rng(seed)
    return MultivariateSeries(rng.standard_exponential((n, 2)))


def _arch_path(eta: float, lam: float, xi2: np.ndarray) -> np.ndarray:
    out = np.empty(xi2.shape[0])
    x = eta
    # plain floats: this loop runs up to 10^6 steps in the tail-index checks
    for t, w in enumerate(xi2.tolist()):
        x = (eta + lam * x) * w
        out[t] = x
    return out


def simulate_arch(n: int, params: ArchParams = ArchParams(), seed: int = 0) -> MultivariateSeries:
    """Bivariate squared ARCH(1) with independent components.

    The chain starts at ``eta`` and the first ``burnin`` values are dropped.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = make_rng(seed)
    xi = rng.standard_normal((params.burnin + n, 2))
    xi2 = xi * xi
    cols = [
        _arch_path(params.eta1, params.lambda1, xi2[:, 0]),
        _arch_path(params.eta2, params.lambda2, xi2[:, 1]),
    ]
    return MultivariateSeries(np.column_stack(cols)[params.burnin:])


def positive_stable(alpha: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Positive ``alpha``-stable draws with Laplace transform ``exp(-s^alpha)``."""
    if alpha == 0.5:
        # Levy: 1 / (2 Z^2) has Laplace transform exp(-sqrt(s))
        z = rng.standard_normal(size)
        return 1.0 / (2.0 * z * z)
    # Kanter's representation
    u = rng.uniform(0.0, np.pi, size)
    w = rng.standard_exponential(size)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)) * (
        np.sin((1.0 - alpha) * u) / w
    ) ** ((1.0 - alpha) / alpha)


def sample_logistic_frechet_pair(alpha: float, rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """``size x 2`` draws from the logistic bivariate law with unit Frechet margins.

    ``P(X1 <= x1, X2 <= x2) = exp(-(x1^(-1/alpha) + x2^(-1/alpha))^alpha)``.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if alpha == 1.0:
        return 1.0 / rng.standard_exponential((size, 2))
    s = positive_stable(alpha, rng, size)
    e = rng.standard_exponential((size, 2))
    return (s[:, None] / e) ** alpha


def simulate_ar1(n: int, params: Ar1Params = Ar1Params(), seed: int = 0) -> MultivariateSeries:
    """AR(1) pair driven by logistic unit-Frechet innovations, started at 0."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = make_rng(seed)
    xi = sample_logistic_frechet_pair(params.alpha, rng, params.burnin + n)
    cols = [
        lfilter([1.0], [1.0, -params.rho1], xi[:, 0]),
        lfilter([1.0], [1.0, -params.rho2], xi[:, 1]),
    ]
    return MultivariateSeries(np.column_stack(cols)[params.burnin:])


SIMULATORS = {
    "iid": lambda n, params, seed: simulate_iid_exp(n, seed),
    "arch": simulate_arch,
    "ar1": simulate_ar1,
}


def simulate(process: str, n: int, params=None, seed: int = 0) -> MultivariateSeries:
    if process not in SIMULATORS:
        raise ValueError(f"unknown process {process!r}; expected one of {sorted(SIMULATORS)}")
    if params is None:
        params = {"iid": None, "arch": ArchParams(), "ar1": Ar1Params()}[process]
    return SIMULATORS[process](n, params, seed)
