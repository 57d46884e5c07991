"""Exact finite-N laws of the extreme moduli of the complex Ginibre ensemble.

All functions take an :class:`~ginibre_extremes.params.EnsembleParams` with
``rect_index == 0`` (a bare integer ``N`` is accepted and means unscaled) and
broadcast over array radii. Radii are in the units of the params' scaling
mode: with ``SQRT_N`` scaling ``r`` stands for the raw modulus ``sqrt(N) r``.
"""
from __future__ import annotations

import numpy as np

from . import _exact, _radial
from .errors import DomainError
from .params import EnsembleParams, as_params

__all__ = [
    "rmin_survival",
    "rmin_pdf",
    "rmax_cdf",
    "rmax_pdf",
    "scaled_variant",
    "joint_prob",
    "conditional_hole_prob",
    "evaluate_curve",
    "default_grid",
]


def _ginibre(params) -> EnsembleParams:
    p = as_params(params)
    if p.rect_index != 0:
        raise DomainError("complex Ginibre laws require rect_index == 0; use the induced module")
    return p


def rmin_survival(params, r):
    """``P(r_min >= r) = prod_{k=0}^{N-1} Q(k+1, r**2)``.

    Examples
    --------
    >>> round(rmin_survival(2, 1.0), 12)
    0.270670566473
    """
    return _exact.survival_min(_ginibre(params), r)


def rmin_pdf(params, r):
    """Density of ``r_min``, ``r > 0``."""
    return _exact.pdf_min(_ginibre(params), r)


def rmax_cdf(params, r):
    """``P(r_max <= r) = prod_{k=0}^{N-1} P(k+1, r**2)``."""
    return _exact.cdf_max(_ginibre(params), r)


def rmax_pdf(params, r):
    """Density of the spectral radius, ``r > 0``; 0 where the CDF underflows."""
    return _exact.pdf_max(_ginibre(params), r)


_OPS = {
    "rmin-survival": rmin_survival,
    "rmin-pdf": rmin_pdf,
    "rmax-cdf": rmax_cdf,
    "rmax-pdf": rmax_pdf,
}


def scaled_variant(op, params, r):
    """Evaluate law ``op`` for the scaled modulus ``r`` under ``params.scaling``.

    CDF-type laws are evaluated at ``sqrt(c) r``; densities are additionally
    multiplied by the Jacobian ``sqrt(c)``.
    """
    p = _ginibre(params)
    if op not in _OPS:
        raise DomainError(f"unknown law {op!r}; expected one of {sorted(_OPS)}")
    return _OPS[op](p, r)


def joint_prob(params, r, R):
    """``P(r_min >= r, r_max <= R) = prod_k [P(k+1, R**2) - P(k+1, r**2)]``."""
    return _exact.annulus(_ginibre(params), r, R)


def conditional_hole_prob(n, s):
    """Probability that no other eigenvalue lies in ``|z| < s`` given one at 0.

    ``H(s) = prod_{k=1}^{N-1} Q(k+1, s**2)``, unscaled ``s``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"conditional hole probability needs N >= 2, got {n!r}")
    s = _exact.check_r(s, name="s")
    lp, _ = _radial.log_extreme(2.0, int(n) - 1, np.ravel(s) ** 2, "upper")
    return _exact._out(np.exp(lp), s)


def default_grid(law, params, points=512):
    p = _ginibre(params)
    which = "min" if law.startswith("rmin") else "max"
    return _exact.default_grid(p, which, points)


def evaluate_curve(law, params, grid=None, points=512):
    """Evaluate ``law`` on ``grid`` (default: see :func:`default_grid`)."""
    return _exact.make_curve(law, _ginibre(params), grid, points)
