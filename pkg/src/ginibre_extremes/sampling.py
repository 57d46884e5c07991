"""Reproducible Monte Carlo draws of the extreme moduli.

Two samplers are provided:

* the radial representation, where the squared moduli are independent
  Gamma(k + L, 1) variables, ``k = 1..N``; only the extremes are kept;
* a direct sampler that diagonalises complex Ginibre matrices (``L = 0``),
  used as an independent oracle for the first.

Randomness comes from counter-based Philox streams. Draws are grouped in
fixed blocks of :data:`BLOCK` and block ``b`` uses the ``b``-th child of
``SeedSequence(seed)``, so results depend only on ``(params, K, seed)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, IntegrityError
from .params import EnsembleParams, as_params

__all__ = [
    "SampleBatch",
    "BLOCK",
    "MATRIX_MAX_N",
    "make_rng",
    "gamma_variates",
    "gamma_draw",
    "sample_extremes_gamma",
    "sample_extremes_matrix",
]

log = logging.getLogger(__name__)

BLOCK = 256
MATRIX_MAX_N = 512
# shapes per column chunk when N is large
_COLS = 4096
_MAX_RESAMPLE = 10


@dataclass(frozen=True)
class SampleBatch:
    """``K`` independent ``(r_min, r_max)`` pairs in the params' scaling."""

    params: EnsembleParams
    seed: int
    draws: np.ndarray
    count: int
    method: str = "gamma"

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float)
        object.__setattr__(self, "draws", draws)
        if draws.ndim != 2 or draws.shape[1] != 2:
            raise IntegrityError("draws must have shape (K, 2)")
        if draws.shape[0] != self.count:
            raise IntegrityError("draw count does not match K")
        if np.any(draws[:, 0] < 0) or np.any(draws[:, 0] > draws[:, 1]):
            raise IntegrityError("every pair must satisfy 0 <= r_min <= r_max")

    @property
    def r_min(self) -> np.ndarray:
        return self.draws[:, 0]

    @property
    def r_max(self) -> np.ndarray:
        return self.draws[:, 1]


def _seed(seed) -> int:
    if seed is None:
        return int(np.random.SeedSequence().entropy) & (2**64 - 1)
    if int(seed) != seed or seed < 0 or seed >= 2**64:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def make_rng(seed) -> np.random.Generator:
    """Philox generator for ``seed`` (an int or a ``SeedSequence``)."""
    return np.random.Generator(np.random.Philox(seed))


def _block_rngs(seed, k_draws):
    nblocks = -(-k_draws // BLOCK)
    children = np.random.SeedSequence(seed).spawn(nblocks)
    for b, child in enumerate(children):
        yield b * BLOCK, min(BLOCK, k_draws - b * BLOCK), make_rng(child)


def gamma_variates(shape, rng: np.random.Generator) -> np.ndarray:
    """Gamma(shape, 1) variates, one per element of ``shape`` (all ``>= 1``).

    Marsaglia and Tsang's method: with ``d = shape - 1/3`` and
    ``c = 1 / sqrt(9 d)``, propose ``d (1 + c z)**3`` for standard normal ``z``
    and accept with a squeeze test followed by the exact log test. Rejected
    elements are redrawn together, so the stream consumption is a
    deterministic function of the inputs.
    """
    shape = np.asarray(shape, dtype=float)
    if np.any(~np.isfinite(shape)) or np.any(shape < 1):
        raise DomainError("gamma_variates requires finite shape >= 1")
    flat = shape.ravel()
    d = flat - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(flat)
    pending = np.arange(flat.size)
    while pending.size:
        z = rng.standard_normal(pending.size)
        u = rng.random(pending.size)
        dp = d[pending]
        t = 1.0 + c[pending] * z
        v = t * t * t
        pos = v > 0
        z2 = z * z
        ok = pos & (u < 1.0 - 0.0331 * z2 * z2)
        slow = pos & ~ok
        if np.any(slow):
            vs = v[slow]
            ok[slow] = np.log(u[slow]) < 0.5 * z2[slow] + dp[slow] * (1.0 - vs + np.log(vs))
        out[pending[ok]] = dp[ok] * v[ok]
        pending = pending[~ok]
    return out.reshape(shape.shape)


def gamma_draw(shape, rng_state: np.random.Generator) -> float:
    """One Gamma(shape, 1) variate, ``shape >= 1``."""
    return float(gamma_variates(np.array([float(shape)]), rng_state)[0])


def sample_extremes_gamma(params, k_draws, seed=None) -> SampleBatch:
    """Sample ``(r_min, r_max)`` from the independent-Gamma representation.

    Parameters
    ----------
    params : EnsembleParams or int
    k_draws : int
        Number of draws ``K >= 1``.
    seed : int, optional
        64-bit seed; drawn from OS entropy (and recorded) when omitted.
    """
    p = as_params(params)
    k_draws = _count(k_draws)
    seed = _seed(seed)
    n, L = p.n, p.rect_index
    shapes = np.arange(1, n + 1, dtype=float) + L
    sqrt_c = math.sqrt(p.scale_factor)
    draws = np.empty((k_draws, 2))
    for start, m, rng in _block_rngs(seed, k_draws):
        gmin = np.full(m, np.inf)
        gmax = np.zeros(m)
        for j in range(0, n, _COLS):
            cols = shapes[j : j + _COLS]
            g = gamma_variates(np.broadcast_to(cols, (m, cols.size)), rng)
            np.minimum(gmin, g.min(axis=1), out=gmin)
            np.maximum(gmax, g.max(axis=1), out=gmax)
        draws[start : start + m, 0] = np.sqrt(gmin) / sqrt_c
        draws[start : start + m, 1] = np.sqrt(gmax) / sqrt_c
    return SampleBatch(p, seed, draws, k_draws, "gamma")


def _ginibre_matrices(rng, m, n):
    re = rng.standard_normal((m, n, n))
    im = rng.standard_normal((m, n, n))
    return (re + 1j * im) / math.sqrt(2.0)


def _moduli_extremes(mats, rng, n):
    try:
        ev = np.abs(np.linalg.eigvals(mats))
        return ev.min(axis=1), ev.max(axis=1)
    except np.linalg.LinAlgError:
        pass
    lo = np.empty(mats.shape[0])
    hi = np.empty(mats.shape[0])
    for i in range(mats.shape[0]):
        mat = mats[i]
        for attempt in range(_MAX_RESAMPLE + 1):
            try:
                ev = np.abs(np.linalg.eigvals(mat))
                break
            except np.linalg.LinAlgError:
                log.warning("eigensolver did not converge; resampling draw (attempt %d)", attempt + 1)
                mat = _ginibre_matrices(rng, 1, n)[0]
        else:
            raise IntegrityError("eigensolver failed repeatedly")
        lo[i], hi[i] = ev.min(), ev.max()
    return lo, hi


def sample_extremes_matrix(params, k_draws, seed=None) -> SampleBatch:
    """Sample ``(r_min, r_max)`` from eigenvalues of complex Ginibre matrices.

    Entries are independent complex Gaussians with real and imaginary parts
    of variance 1/2. Only ``L = 0`` and ``N <= MATRIX_MAX_N`` are supported.
    """
    p = as_params(params)
    if p.rect_index != 0:
        raise DomainError("matrix sampler supports only the complex Ginibre ensemble (L = 0)")
    if p.n > MATRIX_MAX_N:
        raise DomainError(f"matrix sampler is limited to N <= {MATRIX_MAX_N}")
    k_draws = _count(k_draws)
    seed = _seed(seed)
    sqrt_c = math.sqrt(p.scale_factor)
    draws = np.empty((k_draws, 2))
    # keep each stacked eigen-solve under ~32 MB of matrices
    sub = max(1, min(BLOCK, (2**21) // (p.n * p.n)))
    for start, m, rng in _block_rngs(seed, k_draws):
        for s in range(0, m, sub):
            size = min(sub, m - s)
            lo, hi = _moduli_extremes(_ginibre_matrices(rng, size, p.n), rng, p.n)
            draws[start + s : start + s + size, 0] = lo / sqrt_c
            draws[start + s : start + s + size, 1] = hi / sqrt_c
    return SampleBatch(p, seed, draws, k_draws, "matrix")


def _count(k: Optional[int]) -> int:
    if k is None or int(k) != k or k < 1:
        raise DomainError(f"number of draws must be a positive integer, got {k!r}")
    return int(k)
