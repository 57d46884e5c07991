"""Ensemble parameters, scaling modes and evaluated curves."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, IntegrityError

__all__ = ["ScalingMode", "EnsembleParams", "DistributionCurve", "as_params", "CURVE_KINDS"]


class ScalingMode(str, enum.Enum):
    """How moduli are rescaled before a law is evaluated.

    A scaled modulus ``r`` corresponds to the raw modulus ``sqrt(c) * r`` with

    ============================  =========================
    mode                          ``c``
    ============================  =========================
    ``NONE``                      1
    ``SQRT_N``                    ``N``
    ``SQRT_ALPHA_N`` (inner)      ``L`` (``alpha * N``)
    ``SQRT_ONE_PLUS_ALPHA_N``     ``N + L``
    ============================  =========================
    """

    NONE = "none"
    SQRT_N = "sqrt-n"
    SQRT_ALPHA_N = "inner"
    SQRT_ONE_PLUS_ALPHA_N = "outer"

    @classmethod
    def parse(cls, value) -> "ScalingMode":
        if isinstance(value, cls):
            return value
        if value is None:
            return cls.NONE
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f"unknown scaling {value!r}; expected one of {[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class EnsembleParams:
    """Matrix size, rectangularity index and scaling mode.

    Parameters
    ----------
    n : int
        Matrix size ``N >= 1``.
    rect_index : float, optional
        Rectangularity index ``L >= 0``. Derived as ``alpha * n`` when
        ``alpha`` is given.
    alpha : float, optional
        Ratio with ``L = alpha * N`` for proportional-index runs.
    scaling : ScalingMode or str
        Scaling applied to the moduli.
    """

    n: int
    rect_index: Optional[float] = None
    alpha: Optional[float] = None
    scaling: ScalingMode = ScalingMode.NONE

    def __post_init__(self):
        n = self.n
        if isinstance(n, (bool, np.bool_)) or int(n) != n or n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "scaling", ScalingMode.parse(self.scaling))
        if self.alpha is not None:
            alpha = float(self.alpha)
            if not np.isfinite(alpha) or alpha < 0:
                raise DomainError(f"alpha must be finite and >= 0, got {self.alpha!r}")
            rect = alpha * self.n
            if self.rect_index is not None and float(self.rect_index) != rect:
                raise DomainError("rect_index and alpha disagree: rect_index must equal alpha * n")
            object.__setattr__(self, "alpha", alpha)
            object.__setattr__(self, "rect_index", rect)
        else:
            rect = 0.0 if self.rect_index is None else float(self.rect_index)
            if not np.isfinite(rect) or rect < 0:
                raise DomainError(f"rect_index must be finite and >= 0, got {self.rect_index!r}")
            object.__setattr__(self, "rect_index", rect)
        if self.scaling is ScalingMode.SQRT_ALPHA_N and self.rect_index <= 0:
            raise DomainError("inner scaling requires alpha > 0 (L > 0)")

    @classmethod
    def proportional(cls, n, alpha, scaling=ScalingMode.NONE) -> "EnsembleParams":
        return cls(n=n, alpha=alpha, scaling=scaling)

    @property
    def L(self) -> float:
        return self.rect_index

    @property
    def scale_factor(self) -> float:
        """``c`` such that the squared raw modulus is ``c * r**2``."""
        mode = self.scaling
        if mode is ScalingMode.NONE:
            return 1.0
        if mode is ScalingMode.SQRT_N:
            return float(self.n)
        if mode is ScalingMode.SQRT_ALPHA_N:
            return self.rect_index
        return self.n + self.rect_index

    def with_scaling(self, scaling) -> "EnsembleParams":
        return EnsembleParams(n=self.n, rect_index=None if self.alpha is not None else self.rect_index,
                              alpha=self.alpha, scaling=scaling)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "rect_index": self.rect_index,
            "alpha": self.alpha,
            "scaling": self.scaling.value,
        }


def as_params(p) -> EnsembleParams:
    """Accept an :class:`EnsembleParams` or a bare matrix size."""
    if isinstance(p, EnsembleParams):
        return p
    return EnsembleParams(n=p)


CURVE_KINDS = ("cdf", "survival", "pdf", "value")


@dataclass(frozen=True)
class DistributionCurve:
    """Values of one law on a strictly increasing grid.

    ``kind`` selects the invariant that is checked on construction:
    ``"cdf"`` curves are non-decreasing in [0, 1], ``"survival"`` curves are
    non-increasing in [0, 1], ``"pdf"`` curves are non-negative, and
    ``"value"`` curves (log-rates and similar) only need to be finite or -inf.
    """

    law: str
    params: EnsembleParams
    grid: np.ndarray
    values: np.ndarray
    kind: str = "value"
    meta: dict = field(default_factory=dict)

    # monotonicity is checked up to rounding in the last place
    _SLACK = 1e-13

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.kind not in CURVE_KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}")
        if grid.ndim != 1 or grid.shape != values.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be finite and strictly increasing")
        if np.any(np.isnan(values)):
            raise IntegrityError(f"{self.law}: NaN in curve values")
        if self.kind in ("cdf", "survival"):
            if np.any(values < 0) or np.any(values > 1):
                raise IntegrityError(f"{self.law}: probability outside [0, 1]")
            steps = np.diff(values)
            bad = steps < -self._SLACK if self.kind == "cdf" else steps > self._SLACK
            if np.any(bad):
                raise IntegrityError(f"{self.law}: {self.kind} curve is not monotone")
        elif self.kind == "pdf":
            if np.any(values < 0) or np.any(np.isinf(values)):
                raise IntegrityError(f"{self.law}: density must be finite and non-negative")

    def __len__(self):
        return self.grid.size
