"""Exact finite-N laws for the complex induced Ginibre ensemble.

The squared moduli behave as independent Gamma(k + L, 1) variables,
``k = 1..N``. ``L = 0`` reproduces the complex Ginibre laws exactly since
both share one kernel.
"""
from __future__ import annotations

from . import _exact
from .errors import DomainError
from .params import EnsembleParams, ScalingMode, as_params

__all__ = [
    "ind_rmin_survival",
    "ind_rmax_cdf",
    "ind_rmin_pdf",
    "ind_rmax_pdf",
    "ind_scaled_rmax_pdf",
    "ind_scaled_rmin_pdf",
    "ind_joint_prob",
    "evaluate_curve",
]


def ind_rmin_survival(params, r):
    """``P(r_min >= r) = prod_{k=1}^{N} Q(k + L, c r**2)``."""
    return _exact.survival_min(as_params(params), r)


def ind_rmax_cdf(params, r):
    """``P(r_max <= r) = prod_{k=1}^{N} P(k + L, c r**2)``."""
    return _exact.cdf_max(as_params(params), r)


def ind_rmin_pdf(params, r):
    """Density of ``r_min`` in the params' scaling."""
    return _exact.pdf_min(as_params(params), r)


def ind_rmax_pdf(params, r):
    """Density of ``r_max`` in the params' scaling."""
    return _exact.pdf_max(as_params(params), r)


def ind_scaled_rmax_pdf(params: EnsembleParams, r):
    """Density of ``R_N = r_max / sqrt((1 + alpha) N)``.

    Requires ``alpha`` and the ``SQRT_ONE_PLUS_ALPHA_N`` scaling.
    """
    p = as_params(params)
    if p.alpha is None or p.scaling is not ScalingMode.SQRT_ONE_PLUS_ALPHA_N:
        raise DomainError("scaled r_max density needs alpha and outer scaling")
    return _exact.pdf_max(p, r)


def ind_scaled_rmin_pdf(params: EnsembleParams, r):
    """Density of ``r_N = r_min / sqrt(alpha N)``; requires ``alpha > 0`` and inner scaling."""
    p = as_params(params)
    if p.alpha is None or not p.alpha > 0 or p.scaling is not ScalingMode.SQRT_ALPHA_N:
        raise DomainError("scaled r_min density needs alpha > 0 and inner scaling")
    return _exact.pdf_min(p, r)


def ind_joint_prob(params, r, R):
    """``P(r_min >= r, r_max <= R) = prod_k [P(k+L, c R**2) - P(k+L, c r**2)]``."""
    return _exact.annulus(as_params(params), r, R)


def evaluate_curve(law, params, grid=None, points=512):
    return _exact.make_curve(law, as_params(params), grid, points)
