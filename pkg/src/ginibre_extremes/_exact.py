"""Exact extreme-modulus laws shared by the Ginibre and induced ensembles.

With ``a_k = k + L`` (``k = 1..N``) and ``x = c r**2`` (``c`` from the scaling
mode), the squared moduli behave as independent Gamma(a_k, 1) variables, so

    P(r_max <= r) = prod_k P(a_k, x),   P(r_min >= r) = prod_k Q(a_k, x).

Scaling is applied only here, through ``x``, and through the Jacobian
``2 c r`` for densities.
"""
from __future__ import annotations

import math

import numpy as np

from . import _radial, limits
from .errors import DomainError
from .params import DistributionCurve, EnsembleParams


def check_r(r, strict=False, name="r"):
    arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} contains NaN")
    if strict and np.any(arr <= 0):
        raise DomainError(f"{name} must be > 0")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be >= 0")
    return arr


def _out(value, like):
    value = np.asarray(value, dtype=float).reshape(np.shape(like))
    return float(value) if np.ndim(like) == 0 else value


def _xs(params: EnsembleParams, r):
    return params.scale_factor * np.ravel(r) ** 2


def log_cdf_max(params, r):
    r = check_r(r)
    lp, _ = _radial.log_extreme(1.0 + params.rect_index, params.n, _xs(params, r), "lower")
    return _out(lp, r)


def log_survival_min(params, r):
    r = check_r(r)
    lp, _ = _radial.log_extreme(1.0 + params.rect_index, params.n, _xs(params, r), "upper")
    return _out(lp, r)


def cdf_max(params, r):
    return _out(np.exp(log_cdf_max(params, r)), r)


def survival_min(params, r):
    return _out(np.exp(log_survival_min(params, r)), r)


def _pdf(params, r, tail):
    r = check_r(r, strict=True)
    c = params.scale_factor
    rf = np.ravel(r)
    lp, lh = _radial.log_extreme(1.0 + params.rect_index, params.n, c * rf**2, tail, hazard=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        lval = lp + lh + np.log(2.0 * c * rf)
    val = np.where(np.isneginf(lp) | np.isneginf(lh), 0.0, np.exp(lval))
    return _out(val, r)


def pdf_max(params, r):
    return _pdf(params, r, "lower")


def pdf_min(params, r):
    return _pdf(params, r, "upper")


def annulus(params, r, R):
    """``P(r <= r_min, r_max <= R)`` for scaled radii ``r <= R``."""
    r = check_r(r)
    R = check_r(R, name="R")
    r, R = np.broadcast_arrays(r, R)
    if np.any(r > R):
        raise DomainError("inner radius must not exceed outer radius")
    c = params.scale_factor
    lo = c * np.ravel(r) ** 2
    hi = c * np.ravel(R) ** 2
    la = _radial.log_annulus(1.0 + params.rect_index, params.n, lo, hi)
    return _out(np.exp(la), r)


def bracket(params, which, lo_q=1e-9, hi_q=1.0 - 1e-9, iters=80):
    """Scaled radii at which the extreme's CDF equals ``lo_q`` and ``hi_q``."""
    cdf = (lambda r: cdf_max(params, r)) if which == "max" else (lambda r: 1.0 - survival_min(params, r))
    top = params.n + params.rect_index
    x_hi = top + 40.0 * math.sqrt(top) + 200.0
    hi = np.full(2, math.sqrt(x_hi / params.scale_factor))
    lo = np.zeros(2)
    target = np.array([lo_q, hi_q])
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = np.asarray(cdf(mid)) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 1e-12 * hi):
            break
    return float(lo[0]), float(hi[1])


# --------------------------------------------------------------------------
# Curves

LAWS = {
    "rmin-survival": ("min", survival_min, "survival"),
    "rmin-pdf": ("min", pdf_min, "pdf"),
    "rmax-cdf": ("max", cdf_max, "cdf"),
    "rmax-pdf": ("max", pdf_max, "pdf"),
}


def asymptotic_law(params, which):
    """Gumbel law matching ``params`` and its scale factor, or ``(None, None)``."""
    n, L = params.n, params.rect_index
    try:
        if which == "max":
            if L == 0:
                return limits.gumbel_ginibre_rmax(n), float(n)
            return limits.gumbel_outer(L / n, n), n + L
        if L > 0:
            return limits.gumbel_inner(L / n, n), L
    except DomainError:
        pass
    return None, None


def default_grid(params, which, points=512):
    """Uniform grid over mean +- 6 sd of the asymptotic law, in the params' scaling.

    Falls back to the exact ``[1e-9, 1 - 1e-9]`` quantile bracket of the
    extreme when no Gumbel law applies.
    """
    law, c_law = asymptotic_law(params, which)
    if law is not None:
        f = math.sqrt(c_law / params.scale_factor)
        lo = (law.mean - 6.0 * law.std) * f
        hi = (law.mean + 6.0 * law.std) * f
    else:
        lo, hi = bracket(params, which)
    if lo <= 0:
        lo = hi * 1e-6
    return np.linspace(lo, hi, points)


def make_curve(law, params, grid=None, points=512):
    if law not in LAWS:
        raise DomainError(f"unknown law {law!r}; expected one of {sorted(LAWS)}")
    which, fn, kind = LAWS[law]
    if grid is None:
        grid = default_grid(params, which, points)
    grid = np.asarray(grid, dtype=float)
    return DistributionCurve(law, params, grid, np.atleast_1d(fn(params, grid)), kind)
