import math

import numpy as np
import numpy.testing as npt
import pytest

from ginibre_extremes import DomainError, EnsembleParams, IntegrityError
from ginibre_extremes.induced import ind_rmax_cdf
from ginibre_extremes.sampling import (
    BLOCK,
    SampleBatch,
    gamma_draw,
    gamma_variates,
    make_rng,
    sample_extremes_gamma,
    sample_extremes_matrix,
)
from ginibre_extremes.specfun import reg_lower_gamma
from ginibre_extremes.stats import ks_one_sample, ks_two_sample


@pytest.mark.parametrize("shape", [1.0, 2.5, 40.0])
def test_gamma_variates_ks(shape):
    x = gamma_variates(np.full(10**4, shape), make_rng(11))
    assert ks_one_sample(x, lambda t: reg_lower_gamma(shape, t)).statistic <= 0.02


def test_gamma_moments():
    e = gamma_variates(np.ones(10**5), make_rng(3))
    assert abs(e.mean() - 1.0) <= 0.01
    g = gamma_variates(np.full(10**5, 40.0), make_rng(4))
    assert abs(g.mean() - 40.0) <= 0.2
    assert abs(g.var() - 40.0) <= 2.0


def test_gamma_draw_deterministic():
    a = [gamma_draw(3.5, rng) for rng in (make_rng(8), make_rng(8))]
    assert a[0] == a[1]
    r1, r2 = make_rng(8), make_rng(8)
    npt.assert_array_equal(
        [gamma_draw(7.0, r1) for _ in range(20)],
        [gamma_draw(7.0, r2) for _ in range(20)],
    )


@pytest.mark.parametrize("shape", [0.5, 0.0, np.nan])
def test_gamma_shape_domain(shape):
    with pytest.raises(DomainError):
        gamma_draw(shape, make_rng(1))


def test_single_matrix_size():
    batch = sample_extremes_gamma(1, 10**4, seed=21)
    npt.assert_array_equal(batch.r_min, batch.r_max)
    res = ks_one_sample(batch.r_max**2, lambda t: -np.expm1(-t))
    assert res.statistic <= 0.02


def test_outer_edge_overlay():
    p = EnsembleParams.proportional(90, 1 / 9, scaling="outer")
    batch = sample_extremes_gamma(p, 10**4, seed=20001)
    assert ks_one_sample(batch.r_max, lambda t: ind_rmax_cdf(p, t)).statistic <= 0.02


def test_two_by_two_hole_frequency():
    k = 10**6
    batch = sample_extremes_gamma(2, k, seed=5)
    p = 2 * math.exp(-2)
    freq = np.mean(batch.r_min >= 1.0)
    assert abs(freq - p) <= 3 * math.sqrt(p * (1 - p) / k)


def test_determinism_and_seed_record():
    p = EnsembleParams(30, rect_index=1.5)
    a = sample_extremes_gamma(p, 700, seed=42)
    b = sample_extremes_gamma(p, 700, seed=42)
    npt.assert_array_equal(a.draws, b.draws)
    assert a.seed == 42 and a.count == 700
    c = sample_extremes_gamma(p, 700, seed=43)
    assert not np.array_equal(a.draws, c.draws)


def test_prefix_stability():
    # block-wise substreams: a larger K extends the same sequence
    a = sample_extremes_gamma(12, BLOCK + 10, seed=9)
    b = sample_extremes_gamma(12, 3 * BLOCK, seed=9)
    npt.assert_array_equal(a.draws[:BLOCK], b.draws[:BLOCK])


def test_entropy_seed_is_recorded():
    a = sample_extremes_gamma(4, 300)
    b = sample_extremes_gamma(4, 300, seed=a.seed)
    npt.assert_array_equal(a.draws, b.draws)


def test_scaling_applied():
    raw = sample_extremes_gamma(EnsembleParams(40, rect_index=8.0), 500, seed=2)
    scaled = sample_extremes_gamma(EnsembleParams(40, rect_index=8.0, scaling="outer"), 500, seed=2)
    npt.assert_allclose(scaled.draws * math.sqrt(48.0), raw.draws, rtol=1e-15)


def test_large_n_uses_column_chunks():
    batch = sample_extremes_gamma(EnsembleParams(9000, scaling="sqrt-n"), 20, seed=1)
    assert np.all(batch.r_max > 0.95) and np.all(batch.r_max < 1.1)
    assert np.all(batch.r_min >= 0)


@pytest.mark.parametrize("k", [0, -3, 2.5, None])
def test_draw_count_domain(k):
    with pytest.raises(DomainError):
        sample_extremes_gamma(3, k, seed=1)


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
def test_seed_domain(seed):
    with pytest.raises(DomainError):
        sample_extremes_gamma(3, 10, seed=seed)


def test_batch_invariants():
    p = EnsembleParams(3)
    with pytest.raises(IntegrityError):
        SampleBatch(p, 0, np.array([[2.0, 1.0]]), 1)
    with pytest.raises(IntegrityError):
        SampleBatch(p, 0, np.array([[0.5, 1.0]]), 2)
    with pytest.raises(IntegrityError):
        SampleBatch(p, 0, np.zeros((2, 3)), 2)


def test_matrix_single_entry():
    batch = sample_extremes_matrix(1, 10**4, seed=17)
    assert ks_one_sample(batch.r_max**2, lambda t: -np.expm1(-t)).statistic <= 0.02


@pytest.mark.parametrize("column", [0, 1])
def test_matrix_vs_gamma_path(column):
    g = sample_extremes_gamma(50, 2000, seed=80000)
    m = sample_extremes_matrix(50, 2000, seed=80001)
    assert ks_two_sample(g.draws[:, column], m.draws[:, column]).statistic <= 0.05


def test_matrix_deterministic():
    a = sample_extremes_matrix(6, 300, seed=4)
    b = sample_extremes_matrix(6, 300, seed=4)
    npt.assert_array_equal(a.draws, b.draws)
    assert a.method == "matrix"


def test_matrix_domain():
    with pytest.raises(DomainError):
        sample_extremes_matrix(EnsembleParams(5, rect_index=1.0), 10, seed=1)
    with pytest.raises(DomainError):
        sample_extremes_matrix(513, 10, seed=1)
