"""Ground truth for the three benchmark processes.

Each oracle exposes the extremal index function ``theta(tau)`` and the stable
tail dependence function ``S(tau) = -log H~(tau)``:

* i.i.d. exponential pairs: ``S = tau_1 + tau_2``, ``theta = 1``;
* squared ARCH(1) with independent components: ``theta`` is the
  ``tau``-weighted mix of the two component indices;
* AR(1) with logistic (unit Frechet) innovations: ``S`` is a geometric series
  of the logistic ``B`` function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from .errors import NoRoot
from .estimators import HomogeneousNorm, PowerNorm
from .series import as_direction

EULER_GAMMA = 0.5772156649015329
ARCH_LAMBDA_MAX = 2.0 * math.exp(EULER_GAMMA)

# component indices of the squared ARCH(1) benchmark at lambda = 0.7 and 0.3
ARCH_THETA_DEFAULTS = (0.579, 0.887)


def stable_tail_iid(tau) -> float:
    tau = as_direction(tau)
    return float(tau.sum())


def theta_iid(tau) -> float:
    as_direction(tau)
    return 1.0


def _logistic_rates(a: float, b: float, alpha: float) -> float:
    """``B(1/a, 1/b) = (a^(1/alpha) + b^(1/alpha))^alpha`` for rates ``a, b >= 0``."""
    top = max(a, b)
    if top == 0.0:
        return 0.0
    if alpha == 1.0:
        return a + b
    return top * ((a / top) ** (1.0 / alpha) + (b / top) ** (1.0 / alpha)) ** alpha


def logistic_B(x1: float, x2: float, alpha: float) -> float:
    """Logistic exponent measure ``(x1^(-1/alpha) + x2^(-1/alpha))^alpha``."""
    if not (x1 > 0 and x2 > 0):
        raise ValueError(f"logistic_B needs positive arguments, got ({x1}, {x2})")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return _logistic_rates(1.0 / x1, 1.0 / x2, alpha)


@dataclass(frozen=True)
class LogisticTail:
    alpha: float = 0.5

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    def __call__(self, x1: float, x2: float) -> float:
        return logistic_B(x1, x2, self.alpha)


def _alpha_of(B) -> float:
    return B.alpha if isinstance(B, LogisticTail) else float(B)


def stable_tail_ar1(tau, rho1: float, rho2: float, B=LogisticTail(0.5), tol: float = 1e-14) -> float:
    """Stable tail dependence function of the logistic-innovation AR(1) pair.

    Sums ``B(((1-rho_1) rho_1^k tau_1)^-1, ((1-rho_2) rho_2^k tau_2)^-1)`` over
    ``k >= 0`` and stops once a term drops below ``tol`` times the running sum.
    ``B`` is a :class:`LogisticTail` or its ``alpha``.
    """
    tau = as_direction(tau, 2)
    if not (0 < rho1 < 1 and 0 < rho2 < 1):
        raise ValueError(f"rho values must lie in (0, 1), got ({rho1}, {rho2})")
    alpha = _alpha_of(B)
    a = (1.0 - rho1) * tau[0]
    b = (1.0 - rho2) * tau[1]
    total = 0.0
    while True:
        term = _logistic_rates(a, b, alpha)
        total += term
        if term < tol * total:
            return total
        a *= rho1
        b *= rho2


def theta_ar1(tau, rho1: float, rho2: float, B=LogisticTail(0.5), tol: float = 1e-14) -> float:
    tau = as_direction(tau, 2)
    s = stable_tail_ar1(tau, rho1, rho2, B, tol)
    s_shift = stable_tail_ar1(tau * np.array([rho1, rho2]), rho1, rho2, B, tol)
    return (s - s_shift) / s


def theta_arch(tau, theta1_comp: float = ARCH_THETA_DEFAULTS[0], theta2_comp: float = ARCH_THETA_DEFAULTS[1]) -> float:
    tau = as_direction(tau, 2)
    return float((theta1_comp * tau[0] + theta2_comp * tau[1]) / (tau[0] + tau[1]))


def _log_moment_equation(kappa: float, lam: float) -> float:
    # log E(lam * xi^2)^kappa for standard Gaussian xi
    return kappa * math.log(2.0 * lam) + gammaln(kappa + 0.5) - gammaln(0.5)


def solve_kappa(lam: float) -> float:
    """Tail exponent ``kappa > 0`` solving ``E(lam * xi^2)^kappa = 1``, xi ~ N(0, 1)."""
    if not 0 < lam < ARCH_LAMBDA_MAX:
        raise NoRoot(f"lambda={lam} outside (0, 2 exp(gamma)) = (0, {ARCH_LAMBDA_MAX:.6f})")
    f = lambda k: _log_moment_equation(k, lam)  # noqa: E731
    # f(0) = 0 and f'(0) = E log(lam xi^2) < 0, so f dips negative before its positive root
    lo = 1e-8
    while f(lo) >= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            raise NoRoot(f"cannot bracket the root for lambda={lam}")
    hi = 1.0
    while f(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NoRoot(f"cannot bracket the root for lambda={lam}")
    return brentq(f, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=500)


def mc_theta_component_arch(lam: float, kappa: float | None = None, n_paths: int = 100_000, seed: int = 0,
                            floor: float = 1e-10) -> float:
    """Monte Carlo extremal index of one squared ARCH(1) component.

    Estimates ``P(X * sup_j prod_{l<=j} lam xi_l^2 <= 1)`` with ``X`` Pareto
    (index ``kappa``) on ``[1, inf)``. A path is abandoned as a success once its
    running product drops below ``floor``.
    """
    if kappa is None:
        kappa = solve_kappa(lam)
    rng = np.random.Generator(np.random.PCG64(seed))
    # log X <= -log(product) is the success condition, X = U^(-1/kappa)
    log_limit = np.log(rng.random(n_paths)) / kappa
    log_lam = math.log(lam)
    log_floor = math.log(floor)
    log_prod = np.zeros(n_paths)
    active = np.ones(n_paths, dtype=bool)
    failed = np.zeros(n_paths, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        xi = rng.standard_normal(idx.shape[0])
        log_prod[idx] += log_lam + np.log(xi * xi)
        over = log_prod[idx] > log_limit[idx]
        failed[idx[over]] = True
        done = over | (log_prod[idx] < log_floor)
        active[idx[done]] = False
    return 1.0 - failed.mean()


def _excess_exp_ratio(x: float) -> float:
    """``(e^x - 1 - x) / x^2``, switching to its Taylor series for small ``x``."""
    if abs(x) < 1e-4:
        return 0.5 + x / 6.0 + x * x / 24.0 + x ** 3 / 120.0
    return (math.expm1(x) - x) / (x * x)


def asym_var_iid(which: str, tau, L: HomogeneousNorm | None = None, kappa: float = 1.0) -> float:
    """Asymptotic variance of ``sqrt(k_n)`` times the estimator on the i.i.d. benchmark.

    ``which`` is ``"theta1"`` (needs a :class:`PowerNorm`) or ``"theta2"``
    (needs ``kappa > 0``; the value does not depend on ``tau``).
    """
    tau = as_direction(tau)
    if which in ("theta1", "1", 1):
        if not isinstance(L, PowerNorm):
            raise ValueError("the first estimator's variance needs a PowerNorm")
        return _excess_exp_ratio(stable_tail_iid(tau) / L(tau))
    if which in ("theta2", "2", 2):
        if not kappa > 0:
            raise ValueError(f"kappa must be positive, got {kappa}")
        return _excess_exp_ratio(kappa)
    raise ValueError(f"unknown estimator {which!r}")


@dataclass(frozen=True)
class IidExpOracle:
    kind = "iid"

    def theta(self, tau) -> float:
        return theta_iid(tau)

    def stable_tail(self, tau) -> float:
        return stable_tail_iid(tau)

    def component_indices(self) -> tuple[float, float]:
        return (1.0, 1.0)

    def asym_var(self, which: str, tau, L=None, kappa: float = 1.0) -> float | None:
        if which == "theta1" and not isinstance(L, PowerNorm):
            return None
        if which not in ("theta1", "theta2"):
            return None
        return asym_var_iid(which, tau, L, kappa)


@dataclass(frozen=True)
class ArchOracle:
    theta1_comp: float = ARCH_THETA_DEFAULTS[0]
    theta2_comp: float = ARCH_THETA_DEFAULTS[1]
    kind = "arch"

    def theta(self, tau) -> float:
        return theta_arch(tau, self.theta1_comp, self.theta2_comp)

    def stable_tail(self, tau) -> float:
        # independent components
        return stable_tail_iid(tau)

    def component_indices(self) -> tuple[float, float]:
        return (self.theta1_comp, self.theta2_comp)

    def asym_var(self, which, tau, L=None, kappa=1.0):
        return None


@dataclass(frozen=True)
class Ar1Oracle:
    rho1: float = 0.5
    rho2: float = 0.5
    alpha: float = 0.5
    tol: float = 1e-14
    kind = "ar1"

    def theta(self, tau) -> float:
        return theta_ar1(tau, self.rho1, self.rho2, self.alpha, self.tol)

    def stable_tail(self, tau) -> float:
        return stable_tail_ar1(tau, self.rho1, self.rho2, self.alpha, self.tol)

    def component_indices(self) -> tuple[float, float]:
        return (1.0 - self.rho1, 1.0 - self.rho2)

    def asym_var(self, which, tau, L=None, kappa=1.0):
        return None


ProcessOracle = IidExpOracle | ArchOracle | Ar1Oracle
