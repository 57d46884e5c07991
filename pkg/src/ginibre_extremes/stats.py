"""Goodness-of-fit and independence statistics for sampled extremes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import DomainError, IntegrityError

__all__ = [
    "KS_CRITICAL",
    "KSResult",
    "IndependenceReport",
    "empirical_cdf",
    "ks_one_sample",
    "ks_two_sample",
    "independence_check",
    "histogram",
]

#: Asymptotic Kolmogorov quantiles ``c(level)``.
KS_CRITICAL = {0.05: 1.358, 0.01: 1.628}


def _critical(level):
    try:
        return KS_CRITICAL[level]
    except KeyError:
        raise DomainError(f"level must be one of {sorted(KS_CRITICAL)}") from None


@dataclass(frozen=True)
class KSResult:
    statistic: float
    sample_sizes: Tuple[int, ...]
    level: float
    critical_value: float

    def __post_init__(self):
        if not 0.0 <= self.statistic <= 1.0:
            raise IntegrityError("KS statistic outside [0, 1]")

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical_value


@dataclass(frozen=True)
class IndependenceReport:
    pearson_r: float
    joint_sup_gap: float
    pearson_threshold: float
    gap_threshold: float
    grid_size: int
    sample_size: int

    @property
    def pearson_pass(self) -> bool:
        return abs(self.pearson_r) <= self.pearson_threshold

    @property
    def gap_pass(self) -> bool:
        return self.joint_sup_gap <= self.gap_threshold

    @property
    def passed(self) -> bool:
        return self.pearson_pass and self.gap_pass


def _samples(x, minimum=1, name="samples"):
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < minimum:
        raise DomainError(f"{name} needs at least {minimum} values, got {arr.size}")
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} contain NaN")
    return arr


def empirical_cdf(samples, x):
    """Right-continuous empirical CDF ``#{s <= x} / K``.

    ``samples`` need not be sorted.
    """
    s = np.sort(_samples(samples))
    xa = np.asarray(x, dtype=float)
    val = np.searchsorted(s, xa, side="right") / s.size
    return float(val) if np.ndim(x) == 0 else val


def ks_one_sample(samples, cdf: Callable, level=0.01) -> KSResult:
    """One-sample KS statistic against the law ``cdf``.

    ``D = max_i max(i/K - F(x_(i)), F(x_(i)) - (i-1)/K)``.

    Raises
    ------
    IntegrityError
        If ``cdf`` returns values outside [0, 1] or decreasing values along
        the sorted sample.
    """
    s = np.sort(_samples(samples, 50))
    k = s.size
    f = np.asarray(cdf(s), dtype=float).reshape(s.shape)
    if np.any(np.isnan(f)) or np.any(f < 0) or np.any(f > 1):
        raise IntegrityError("cdf returned values outside [0, 1]")
    if np.any(np.diff(f) < -1e-12):
        raise IntegrityError("cdf is not monotone on the samples")
    i = np.arange(1, k + 1)
    d = max(float(np.max(i / k - f)), float(np.max(f - (i - 1) / k)))
    c = _critical(level)
    return KSResult(min(max(d, 0.0), 1.0), (k,), level, c / math.sqrt(k))


def ks_two_sample(a, b, level=0.01) -> KSResult:
    """Two-sample KS statistic, critical value ``c(level) sqrt((m+n)/(m n))``."""
    a = np.sort(_samples(a, 50, "first sample"))
    b = np.sort(_samples(b, 50, "second sample"))
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    m, n = a.size, b.size
    return KSResult(d, (m, n), level, _critical(level) * math.sqrt((m + n) / (m * n)))


def independence_check(batch, grid_size=20, pearson_c=3.0, gap_c=2.5, gap_level=0.01):
    """Correlation and joint-CDF factorization gap of ``(r_min, r_max)`` pairs.

    The gap is ``max |F(r, R) - F_min(r) F_max(R)|`` over a
    ``grid_size x grid_size`` grid of empirical quantiles, with
    ``F(r, R) = #{r_min <= r, r_max <= R} / K``. Pass thresholds are
    ``pearson_c / sqrt(K)`` and ``gap_c * sqrt(log(2 / gap_level) / (2 K))``.

    ``batch`` is a :class:`~ginibre_extremes.sampling.SampleBatch` or a
    ``(K, 2)`` array.
    """
    draws = getattr(batch, "draws", batch)
    draws = np.asarray(draws, dtype=float)
    if draws.ndim != 2 or draws.shape[1] != 2:
        raise DomainError("expected (K, 2) pairs")
    k = draws.shape[0]
    if k < 1000:
        raise DomainError(f"independence check needs K >= 1000, got {k}")
    if grid_size < 1:
        raise DomainError("grid_size must be >= 1")
    u, v = draws[:, 0], draws[:, 1]
    if np.ptp(u) == 0 or np.ptp(v) == 0:
        raise IntegrityError("degenerate (constant) marginal")
    rho = float(np.corrcoef(u, v)[0, 1])
    q = (np.arange(1, grid_size + 1) - 0.5) / grid_size
    gu = np.quantile(u, q)
    gv = np.quantile(v, q)
    # u <= gu[j] exactly when iu <= j
    iu = np.searchsorted(gu, u, side="left")
    iv = np.searchsorted(gv, v, side="left")
    counts = np.zeros((grid_size + 1, grid_size + 1))
    np.add.at(counts, (iu, iv), 1.0)
    joint = counts.cumsum(0).cumsum(1)[:grid_size, :grid_size] / k
    fu = counts.sum(1).cumsum()[:grid_size, None] / k
    fv = counts.sum(0).cumsum()[None, :grid_size] / k
    gap = float(np.max(np.abs(joint - fu * fv)))
    return IndependenceReport(
        pearson_r=max(-1.0, min(1.0, rho)),
        joint_sup_gap=gap,
        pearson_threshold=pearson_c / math.sqrt(k),
        gap_threshold=gap_c * math.sqrt(math.log(2.0 / gap_level) / (2.0 * k)),
        grid_size=grid_size,
        sample_size=k,
    )


def histogram(samples, bins=50, range=None):
    """Density-normalised histogram; returns ``(heights, edges)`` with area 1."""
    s = _samples(samples)
    if int(bins) != bins or bins < 1:
        raise DomainError("bins must be a positive integer")
    heights, edges = np.histogram(s, bins=int(bins), range=range)
    total = heights.sum()
    if total == 0:
        raise DomainError("no samples fall inside the histogram range")
    with np.errstate(over="ignore", divide="ignore"):
        dens = heights / (total * np.diff(edges))
    if not np.all(np.isfinite(dens)):
        raise DomainError("bins too narrow for a representable density")
    return dens, edges
