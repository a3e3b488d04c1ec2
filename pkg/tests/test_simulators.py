import math

import numpy as np
import pytest
from scipy import stats

from extremalindex.oracles import solve_kappa
from extremalindex.simulators import (
    RNG_IDENTITY,
    Ar1Params,
    ArchParams,
    default_ar1_burnin,
    make_rng,
    positive_stable,
    sample_logistic_frechet_pair,
    simulate,
    simulate_ar1,
    simulate_arch,
    simulate_iid_exp,
)

N_DIST = 100_000
KS_CRIT = 1.95 / math.sqrt(N_DIST)


def hill_tail_index(x, fraction=0.01):
    x = np.sort(np.asarray(x))[::-1]
    k = int(fraction * x.shape[0])
    gamma = np.mean(np.log(x[:k])) - math.log(x[k])
    return 1.0 / gamma


def frechet_cdf(x):
    return np.exp(-1.0 / x)


# --- plumbing ---------------------------------------------------------------

def test_rng_identity_and_seed_range():
    assert RNG_IDENTITY == "numpy.random.PCG64"
    make_rng(2**64 - 1)
    with pytest.raises(ValueError):
        make_rng(-1)
    with pytest.raises(ValueError):
        make_rng(2**64)


def test_param_validation():
    with pytest.raises(ValueError):
        ArchParams(lambda1=4.0)
    with pytest.raises(ValueError):
        ArchParams(eta1=0.0)
    with pytest.raises(ValueError):
        Ar1Params(rho1=1.0)
    with pytest.raises(ValueError):
        Ar1Params(alpha=0.0)
    assert Ar1Params(0.5, 0.5).burnin == 1000
    assert default_ar1_burnin(0.99, 0.1) == math.ceil(math.log(1e-12) / math.log(0.99))
    with pytest.raises(ValueError):
        simulate("garch", 10)


@pytest.mark.parametrize("process", ["iid", "arch", "ar1"])
def test_determinism_shape_and_finiteness(process):
    a = simulate(process, 500, seed=42).values
    b = simulate(process, 500, seed=42).values
    assert a.shape == (500, 2)
    assert np.array_equal(a, b)
    assert np.all(np.isfinite(a))
    assert not np.array_equal(a, simulate(process, 500, seed=43).values)


# --- i.i.d. exponential -----------------------------------------------------

def test_iid_marginals_and_independence():
    x = simulate_iid_exp(N_DIST, 1).values
    for col in x.T:
        assert stats.kstest(col, "expon").statistic < KS_CRIT
    assert abs(np.corrcoef(x.T)[0, 1]) < 0.01


def test_stream_independence_across_seeds():
    a = simulate_iid_exp(N_DIST, 100).values[:, 0]
    b = simulate_iid_exp(N_DIST, 101).values[:, 0]
    assert abs(stats.spearmanr(a, b).statistic) < 0.01


# --- ARCH -------------------------------------------------------------------

def test_arch_positive():
    x = simulate_arch(5000, ArchParams(), 3).values
    assert np.all(x > 0)


def test_arch_zero_coupling_is_scaled_chi_square():
    params = ArchParams(eta1=2.0, eta2=3.0, lambda1=0.0, lambda2=0.0, burnin=7)
    x = simulate_arch(50, params, 9).values
    xi = make_rng(9).standard_normal((57, 2))[7:]
    assert np.array_equal(x, xi * xi * np.array([2.0, 3.0]))


def test_arch_recursion_matches_definition():
    params = ArchParams(burnin=0)
    x = simulate_arch(20, params, 4).values
    xi2 = make_rng(4).standard_normal((20, 2)) ** 2
    eta = np.array([params.eta1, params.eta2])
    lam = np.array([params.lambda1, params.lambda2])
    prev = eta
    for t in range(20):
        prev = (eta + lam * prev) * xi2[t]
        assert np.allclose(x[t], prev, rtol=1e-14)


@pytest.mark.slow
def test_arch_hill_index_strong_coupling():
    x = simulate_arch(1_000_000, ArchParams(), 2024).values[:, 0]
    kappa = solve_kappa(0.7)
    assert abs(hill_tail_index(x) - kappa) <= 0.10 * kappa


# --- logistic innovations and AR(1) -----------------------------------------

@pytest.mark.parametrize("alpha", [0.5, 0.3, 0.8])
def test_positive_stable_laplace_transform(alpha):
    s = positive_stable(alpha, make_rng(6), N_DIST)
    for t in (0.5, 1.0, 2.0):
        assert np.mean(np.exp(-t * s)) == pytest.approx(math.exp(-t ** alpha), abs=0.01)


@pytest.mark.parametrize("alpha", [0.5, 0.3, 1.0])
def test_logistic_pair_margins(alpha):
    xi = sample_logistic_frechet_pair(alpha, make_rng(17), N_DIST)
    for col in xi.T:
        assert stats.kstest(col, frechet_cdf).statistic < KS_CRIT


@pytest.mark.parametrize("alpha", [0.5, 0.3])
def test_logistic_pair_joint_cdf(alpha):
    xi = sample_logistic_frechet_pair(alpha, make_rng(23), N_DIST)
    p = math.exp(-(2.0 ** alpha))
    se = math.sqrt(p * (1 - p) / N_DIST)
    hat = np.mean((xi[:, 0] <= 1.0) & (xi[:, 1] <= 1.0))
    assert abs(hat - p) <= 3 * se


def test_logistic_pair_independent_case():
    xi = sample_logistic_frechet_pair(1.0, make_rng(29), N_DIST)
    assert abs(stats.spearmanr(xi[:, 0], xi[:, 1]).statistic) < 0.01


def test_logistic_pair_copula_rank_invariance():
    xi = sample_logistic_frechet_pair(0.5, make_rng(31), N_DIST)
    transformed = np.column_stack([np.log(xi[:, 0]), xi[:, 1] ** 3])
    assert np.array_equal(stats.rankdata(xi, axis=0), stats.rankdata(transformed, axis=0))
    # the logistic copula has Kendall's tau = 1 - alpha
    sub = xi[:20_000]
    assert stats.kendalltau(sub[:, 0], sub[:, 1]).statistic == pytest.approx(0.5, abs=0.02)


def test_ar1_tiny_rho_reproduces_innovations():
    params = Ar1Params(rho1=1e-300, rho2=1e-300, alpha=0.5, burnin=0)
    x = simulate_ar1(200, params, 12).values
    xi = sample_logistic_frechet_pair(0.5, make_rng(12), 200)
    assert np.allclose(x, xi, rtol=1e-12, atol=0)


def test_ar1_recursion_matches_definition():
    params = Ar1Params(rho1=0.3, rho2=0.8, alpha=0.5, burnin=5)
    x = simulate_ar1(30, params, 13).values
    xi = sample_logistic_frechet_pair(0.5, make_rng(13), 35)
    state = np.zeros(2)
    path = []
    for t in range(35):
        state = np.array([0.3, 0.8]) * state + xi[t]
        path.append(state)
    assert np.allclose(x, np.array(path)[5:], rtol=1e-12)


@pytest.mark.slow
def test_ar1_hill_index_near_one():
    x = simulate_ar1(1_000_000, Ar1Params(), 77).values
    for col in x.T:
        assert abs(hill_tail_index(col) - 1.0) <= 0.10
