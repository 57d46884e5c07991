"""Asymptotic laws for the extreme moduli.

Gumbel limits at the edges of the spectrum, small- and large-``r`` tail
approximations of the minimum modulus, and the large-deviation rate of the
scaled minimum modulus.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, gammaln

from .errors import DomainError

__all__ = [
    "GumbelLaw",
    "TailKind",
    "TailLaw",
    "AsymptoticRegimeWarning",
    "gumbel_gamma",
    "gumbel_outer",
    "gumbel_inner",
    "gumbel_ginibre_rmax",
    "left_tail_law",
    "right_tail_law",
    "generalized_gamma_law",
    "ldp_law",
    "tail_rmin_left",
    "tail_rmin_right",
    "tail_rmin_generalized_gamma",
    "ldp_log_survival",
]

_EULER_GAMMA = 0.5772156649015329


class AsymptoticRegimeWarning(UserWarning):
    """Raised when an asymptotic formula is evaluated outside its regime."""


def _arr(r, name="r"):
    arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} contains NaN")
    return arr


def _out(value, like):
    return float(value) if np.ndim(like) == 0 else value


# --------------------------------------------------------------------------
# Gumbel laws


@dataclass(frozen=True)
class GumbelLaw:
    """Gumbel law for a scaled extreme modulus.

    For ``orientation="max"`` the CDF is ``exp(-exp(-z))``; for ``"min"`` the
    survival function is ``exp(-exp(z))``, with ``z = (r - location) / scale``.
    """

    orientation: str
    location: float
    scale: float
    gamma_alpha_n: float

    def __post_init__(self):
        if self.orientation not in ("max", "min"):
            raise DomainError(f"orientation must be 'max' or 'min', got {self.orientation!r}")
        if not self.scale > 0:
            raise DomainError("Gumbel scale must be > 0")

    def z(self, r):
        return (_arr(r) - self.location) / self.scale

    def cdf(self, r):
        z = self.z(r)
        if self.orientation == "max":
            val = np.exp(-np.exp(-z))
        else:
            val = -np.expm1(-np.exp(z))
        return _out(val, r)

    def survival(self, r):
        z = self.z(r)
        if self.orientation == "max":
            val = -np.expm1(-np.exp(-z))
        else:
            val = np.exp(-np.exp(z))
        return _out(val, r)

    def pdf(self, r):
        z = self.z(r)
        with np.errstate(over="ignore"):
            if self.orientation == "max":
                val = np.exp(-z - np.exp(-z)) / self.scale
            else:
                val = np.exp(z - np.exp(z)) / self.scale
        return _out(val, r)

    @property
    def mean(self) -> float:
        sign = 1.0 if self.orientation == "max" else -1.0
        return self.location + sign * _EULER_GAMMA * self.scale

    @property
    def std(self) -> float:
        return math.pi * self.scale / math.sqrt(6.0)


def gumbel_gamma(cn, n) -> float:
    """Centering sequence ``log sqrt(cn / 2 pi) - log log n``."""
    if n < 3:
        raise DomainError(f"Gumbel law needs N >= 3 (log log N > 0), got N={n}")
    if not cn > 0:
        raise DomainError("effective size must be > 0")
    return 0.5 * math.log(cn / (2.0 * math.pi)) - math.log(math.log(n))


def _gumbel(cn, n, orientation):
    g = gumbel_gamma(cn, n)
    if g <= 0:
        raise DomainError(
            f"gamma sequence is {g:.6g} <= 0 at N={n}; no Gumbel law for this size"
        )
    shift = math.sqrt(g / (2.0 * cn))
    loc = 1.0 + shift if orientation == "max" else 1.0 - shift
    scale = 1.0 / (2.0 * math.sqrt(2.0 * cn * g))
    return GumbelLaw(orientation, loc, scale, g)


def _check_alpha(alpha):
    if not (np.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")


def gumbel_outer(alpha, n) -> GumbelLaw:
    """Gumbel law of the spectral radius scaled by ``sqrt((1 + alpha) N)``."""
    _check_alpha(alpha)
    return _gumbel((1.0 + alpha) * n, n, "max")


def gumbel_inner(alpha, n) -> GumbelLaw:
    """Gumbel law (minima) of the minimum modulus scaled by ``sqrt(alpha N)``."""
    _check_alpha(alpha)
    return _gumbel(alpha * n, n, "min")


def gumbel_ginibre_rmax(n) -> GumbelLaw:
    """Gumbel law of the complex Ginibre spectral radius scaled by ``sqrt(N)``."""
    return _gumbel(float(n), n, "max")


# --------------------------------------------------------------------------
# Tail laws


class TailKind(str, enum.Enum):
    RAYLEIGH = "rayleigh"
    WEIBULL = "weibull"
    GENERALIZED_GAMMA = "generalized-gamma"
    LARGE_DEVIATION = "large-deviation"


@dataclass(frozen=True)
class TailLaw:
    """Tagged tail approximation.

    Parameters by kind:

    * ``RAYLEIGH``: ``sigma``.
    * ``WEIBULL``: ``shape``, ``scale``; a right-tail law additionally carries
      ``rect_index`` and ``side="right"``.
    * ``GENERALIZED_GAMMA``: ``a`` (scale), ``d`` and ``p`` (shapes), density
      ``p / a**d * r**(d-1) * exp(-(r/a)**p) / Gamma(d/p)``.
    * ``LARGE_DEVIATION``: ``speed`` and ``rate_power``.
    """

    kind: TailKind
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", TailKind(self.kind))
        for key in ("sigma", "shape", "scale", "a", "d", "p", "speed"):
            if key in self.params and not self.params[key] > 0:
                raise DomainError(f"tail parameter {key} must be > 0")

    def log_survival(self, r):
        """Log of ``P(r_min >= r)`` under the law."""
        r = _arr(r)
        k, p = self.kind, self.params
        with np.errstate(divide="ignore"):
            if k is TailKind.RAYLEIGH:
                val = -(r**2) / (2.0 * p["sigma"] ** 2)
            elif k is TailKind.WEIBULL and p.get("side") == "right":
                L = p["rect_index"]
                val = -(r**4) / 4.0 - r**2 / 2.0 + L * np.log(r) - 0.5 * gammaln(L + 1.0)
                val = np.minimum(val, 0.0)
            elif k is TailKind.WEIBULL:
                val = -np.exp(p["shape"] * (np.log(r) - math.log(p["scale"])))
            elif k is TailKind.GENERALIZED_GAMMA:
                val = np.log(gammaincc(p["d"] / p["p"], (r / p["a"]) ** p["p"]))
            else:
                val = -p["speed"] * r ** p["rate_power"]
        return _out(val, r)

    def survival(self, r):
        return _out(np.exp(self.log_survival(r)), r)

    def cdf(self, r):
        return _out(-np.expm1(self.log_survival(r)), r)

    def pdf(self, r):
        r = _arr(r)
        k, p = self.kind, self.params
        with np.errstate(divide="ignore", invalid="ignore"):
            if k is TailKind.GENERALIZED_GAMMA:
                a, d, q = p["a"], p["d"], p["p"]
                val = np.exp(
                    math.log(q) - d * math.log(a) + (d - 1) * np.log(r)
                    - (r / a) ** q - gammaln(d / q)
                )
                val = np.where(r > 0, val, 0.0 if d > 1 else np.inf)
            elif k is TailKind.RAYLEIGH:
                s2 = p["sigma"] ** 2
                val = r / s2 * np.exp(-(r**2) / (2 * s2))
            elif k is TailKind.WEIBULL and p.get("side") == "right":
                L = p["rect_index"]
                ls = self.log_survival(r)
                val = np.exp(ls) * (r**3 + r - L / r)
            elif k is TailKind.WEIBULL:
                sh, sc = p["shape"], p["scale"]
                val = sh / sc * (r / sc) ** (sh - 1) * np.exp(-((r / sc) ** sh))
            else:
                raise DomainError("the large-deviation law has no density")
        return _out(val, r)


def left_tail_law(L) -> TailLaw:
    """Small-``r`` law of the unscaled minimum modulus at rectangularity ``L``."""
    L = float(L)
    if not (np.isfinite(L) and L >= 0):
        raise DomainError("rect index L must be >= 0")
    if L == 0:
        return TailLaw(TailKind.RAYLEIGH, {"sigma": 1.0 / math.sqrt(2.0)})
    k = 2.0 * (L + 1.0)
    scale = math.exp(gammaln(L + 2.0) / k)
    return TailLaw(TailKind.WEIBULL, {"shape": k, "scale": scale})


def right_tail_law(L=0.0) -> TailLaw:
    """Large-``r`` law of the unscaled minimum modulus (shape 4, scale sqrt 2)."""
    L = float(L)
    if not (np.isfinite(L) and L >= 0):
        raise DomainError("rect index L must be >= 0")
    return TailLaw(
        TailKind.WEIBULL,
        {"shape": 4.0, "scale": math.sqrt(2.0), "rect_index": L, "side": "right"},
    )


def generalized_gamma_law() -> TailLaw:
    """Small-``r`` density ``2 r**3 exp(-r**2)`` of the minimum modulus at ``L = 1``."""
    return TailLaw(TailKind.GENERALIZED_GAMMA, {"a": 1.0, "d": 4.0, "p": 2.0})


def ldp_law(n) -> TailLaw:
    if n < 1:
        raise DomainError("n must be >= 1")
    return TailLaw(TailKind.LARGE_DEVIATION, {"speed": n * n / 4.0, "rate_power": 4.0})


def tail_rmin_left(L, r):
    """``1 - exp(-r**(2(L+1)) / (L+1)!)``, the small-``r`` CDF of ``r_min``."""
    r = _arr(r)
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    return left_tail_law(L).cdf(r)


def tail_rmin_right(L, r):
    """Leading-order CDF of ``r_min`` for large ``r``.

    ``1 - exp(-r**4/4 - r**2/2 + L log r - log Gamma(L+1) / 2)``. Issues an
    :class:`AsymptoticRegimeWarning` for ``r <= 1.5``.
    """
    r = _arr(r)
    if np.any(r <= 1):
        raise DomainError("right-tail asymptotic requires r > 1")
    if np.any(r <= 1.5):
        warnings.warn(
            "right-tail asymptotic evaluated at r <= 1.5 where it is unreliable",
            AsymptoticRegimeWarning,
            stacklevel=2,
        )
    return right_tail_law(L).cdf(r)


def tail_rmin_generalized_gamma(r):
    """Density ``2 r**3 exp(-r**2)``."""
    r = _arr(r)
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    val = 2.0 * r**3 * np.exp(-(r**2))
    return _out(val, r)


def ldp_log_survival(n, lam):
    """``-N**2 lam**4 / 4``, the large-deviation limit of ``log P(r_min / sqrt N >= lam)``."""
    lam_a = _arr(lam, "lam")
    if np.any(lam_a <= 0) or np.any(lam_a > 1):
        raise DomainError("lam must lie in (0, 1]")
    if n < 1:
        raise DomainError("n must be >= 1")
    val = -(float(n) ** 2) * lam_a**4 / 4.0
    return _out(val, lam)
