import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats as sps

from ginibre_extremes import DomainError, IntegrityError
from ginibre_extremes.stats import (
    KS_CRITICAL,
    empirical_cdf,
    histogram,
    independence_check,
    ks_one_sample,
    ks_two_sample,
)


def _brute_one(samples, cdf):
    # sup over both one-sided limits of the empirical CDF at every sample point
    k = len(samples)
    best = 0.0
    for x in samples:
        f = cdf(x)
        below = sum(1 for s in samples if s < x) / k
        upto = sum(1 for s in samples if s <= x) / k
        best = max(best, abs(upto - f), abs(below - f))
    return best


def _brute_two(a, b):
    best = 0.0
    for x in list(a) + list(b):
        fa = sum(1 for s in a if s <= x) / len(a)
        fb = sum(1 for s in b if s <= x) / len(b)
        best = max(best, abs(fa - fb))
    return best


def test_empirical_cdf_examples():
    assert empirical_cdf([1.0, 2.0, 3.0], 2.0) == pytest.approx(2 / 3)
    assert empirical_cdf([3.0, 1.0, 2.0], 10.0) == 1.0
    assert empirical_cdf([3.0, 1.0, 2.0], 0.5) == 0.0
    npt.assert_allclose(empirical_cdf([1.0, 2.0, 3.0], [0.0, 1.0, 2.5]), [0.0, 1 / 3, 2 / 3])
    with pytest.raises(DomainError):
        empirical_cdf([], 1.0)


@pytest.mark.parametrize("k", [50, 100, 200])
@pytest.mark.parametrize("seed", [0, 1])
def test_ks_one_sample_brute_force(k, seed):
    x = np.random.default_rng(seed).normal(size=k)
    fast = ks_one_sample(x, sps.norm.cdf).statistic
    npt.assert_allclose(fast, _brute_one(x, sps.norm.cdf), rtol=0, atol=1e-15)
    npt.assert_allclose(fast, sps.kstest(x, "norm").statistic, atol=1e-15)


@pytest.mark.parametrize("m,n", [(50, 50), (100, 73), (200, 150)])
def test_ks_two_sample_brute_force(m, n):
    rng = np.random.default_rng(m + n)
    a = rng.normal(size=m)
    b = rng.normal(0.3, 1.0, size=n)
    assert ks_two_sample(a, b).statistic == pytest.approx(_brute_two(a, b), abs=1e-15)


def test_ks_two_sample_with_ties():
    a = np.repeat(np.arange(10.0), 6)
    b = np.repeat(np.arange(2.0, 12.0), 7)
    assert ks_two_sample(a, b).statistic == pytest.approx(_brute_two(a, b), abs=1e-15)


def test_ks_two_sample_trivial():
    x = np.linspace(0, 1, 80)
    assert ks_two_sample(x, x).statistic == 0.0
    assert ks_two_sample(x, x + 5).statistic == 1.0


def test_ks_critical_values():
    x = np.random.default_rng(0).random(400)
    res = ks_one_sample(x, lambda t: t)
    assert res.critical_value == pytest.approx(1.628 / 20)
    assert ks_one_sample(x, lambda t: t, level=0.05).critical_value == pytest.approx(1.358 / 20)
    r2 = ks_two_sample(x[:100], x[100:])
    npt.assert_allclose(r2.critical_value, KS_CRITICAL[0.01] * math.sqrt(400 / (100 * 300)))
    with pytest.raises(DomainError):
        ks_one_sample(x, lambda t: t, level=0.1)


def test_ks_self_consistency_rate():
    passes = 0
    for seed in range(100):
        x = np.random.default_rng(seed).random(10**4)
        passes += ks_one_sample(x, lambda t: t).passed
    assert passes >= 95


def test_ks_detects_shift():
    x = np.random.default_rng(3).normal(size=2000) + 0.5
    assert not ks_one_sample(x, sps.norm.cdf).passed


def test_ks_bad_cdf():
    x = np.linspace(0.1, 0.9, 60)
    with pytest.raises(IntegrityError):
        ks_one_sample(x, lambda t: 2 * t)
    with pytest.raises(IntegrityError):
        ks_one_sample(x, lambda t: 1 - t)
    with pytest.raises(DomainError):
        ks_one_sample(x[:49], lambda t: t)


def test_independence_examples():
    rng = np.random.default_rng(12)
    u = rng.random((10**4, 2))
    rep = independence_check(u)
    assert rep.passed
    assert rep.pearson_threshold == pytest.approx(0.03)
    assert rep.gap_threshold == pytest.approx(2.5 * math.sqrt(math.log(200) / 2e4))
    x = rng.random(10**4)
    rep = independence_check(np.column_stack([x, x]))
    assert rep.pearson_r == pytest.approx(1.0)
    assert not rep.passed


def test_independence_rate():
    passes = 0
    for seed in range(100):
        pairs = np.random.default_rng(seed).exponential(size=(10**4, 2))
        passes += independence_check(pairs).passed
    assert passes >= 95


def test_independence_gap_brute_force():
    rng = np.random.default_rng(4)
    pairs = rng.normal(size=(1200, 2))
    pairs[:, 1] += 0.4 * pairs[:, 0]
    rep = independence_check(pairs, grid_size=7)
    q = (np.arange(1, 8) - 0.5) / 7
    gu, gv = np.quantile(pairs[:, 0], q), np.quantile(pairs[:, 1], q)
    gap = 0.0
    for a in gu:
        for b in gv:
            fu = np.mean(pairs[:, 0] <= a)
            fv = np.mean(pairs[:, 1] <= b)
            fj = np.mean((pairs[:, 0] <= a) & (pairs[:, 1] <= b))
            gap = max(gap, abs(fj - fu * fv))
    assert rep.joint_sup_gap == pytest.approx(gap, abs=1e-15)


def test_independence_errors():
    with pytest.raises(DomainError):
        independence_check(np.ones((999, 2)))
    with pytest.raises(IntegrityError):
        independence_check(np.column_stack([np.ones(2000), np.arange(2000.0)]))
    with pytest.raises(DomainError):
        independence_check(np.ones((2000, 3)))


def test_histogram_single_bin():
    heights, edges = histogram([0.0, 1.0, 4.0], bins=1)
    npt.assert_allclose(heights, [1 / 4])
    npt.assert_allclose(edges, [0.0, 4.0])


def test_histogram_uniform_flat():
    k, bins = 10**5, 50
    x = np.random.default_rng(6).random(k)
    heights, edges = histogram(x, bins=bins, range=(0, 1))
    counts = heights * np.diff(edges) * k
    p = 1 / bins
    assert np.all(np.abs(counts - k * p) <= 3 * math.sqrt(k * p * (1 - p)))


def test_histogram_errors():
    with pytest.raises(DomainError):
        histogram([], bins=3)
    with pytest.raises(DomainError):
        histogram([1.0, 2.0], bins=0)
    with pytest.raises(DomainError):
        histogram([1.0, 2.0], bins=4, range=(5, 6))


@settings(max_examples=100, deadline=None)
@given(
    x=arrays(np.float64, st.integers(1, 300), elements=st.floats(-1e6, 1e6)),
    bins=st.integers(1, 40),
)
def test_histogram_area(x, bins):
    counts, e = np.histogram(x, bins=bins)
    with np.errstate(over="ignore", divide="ignore"):
        representable = np.all(np.isfinite(counts / (x.size * np.diff(e))))
    # subnormal sample ranges give densities beyond the float range
    if not representable:
        with pytest.raises(DomainError):
            histogram(x, bins=bins)
        return
    heights, edges = histogram(x, bins=bins)
    assert abs(np.sum(heights * np.diff(edges)) - 1.0) <= 1e-12
