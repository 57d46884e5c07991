"""Log-space products of incomplete gamma tails over consecutive shapes.

Every exact law in the package reduces to one of

    sum_{k=0}^{n-1} log T(a0 + k, x)        T = P (maximum) or Q (minimum)

together with the log of the hazard sum

    sum_{k=0}^{n-1} f(a0 + k, x) / T(a0 + k, x)

(``f`` the Gamma(a, 1) density), which turns the product into a density, or
the annulus product ``sum_k log(P(a0 + k, x_hi) - P(a0 + k, x_lo))``.

Small ``n`` is evaluated directly. Large ``n`` skips the factors that are 1
to working precision and stops as soon as the partial sum drops below the
point where ``exp`` underflows; the remaining window has width of order
``sqrt(x)`` around ``a = x``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from . import specfun

# direct evaluation below this many shapes
DIRECT_MAX = 20000
# cap on n * points per direct block
_BLOCK = 1 << 21
_CHUNK = 8192
# partial sums below this are reported as -inf
_STOP = -1000.0


def _threshold(n):
    return -60.0 - math.log(n)


def _tails(a, x):
    lnp, lnq = specfun.log_gamma_tails(a, x)
    return np.asarray(lnp), np.asarray(lnq)


def log_extreme(a0, n, x, tail, hazard=False, window=None):
    """Return ``(log product, log hazard sum)`` for each abscissa in ``x``.

    Parameters
    ----------
    a0 : float
        First shape, ``1 + L``.
    n : int
        Number of factors.
    x : array_like
        Gamma arguments (squared raw moduli), ``x >= 0``.
    tail : {"lower", "upper"}
        ``"lower"`` multiplies ``P`` (law of the maximum), ``"upper"``
        multiplies ``Q`` (law of the minimum).
    hazard : bool
        Also return the log hazard sum; ``None`` otherwise.
    window : bool, optional
        Force (``True``) or forbid (``False``) the windowed path.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if tail not in ("lower", "upper"):
        raise ValueError(tail)
    lprod = np.empty_like(x)
    lhaz = np.full_like(x, np.nan) if hazard else None

    zero = x == 0.0
    inf = np.isinf(x)
    lprod[zero] = -np.inf if tail == "lower" else 0.0
    lprod[inf] = 0.0 if tail == "lower" else -np.inf
    if hazard:
        lhaz[inf] = -np.inf
        if tail == "upper":
            # only the a = 1 factor has f(a, 0) != 0
            lhaz[zero] = 0.0 if a0 == 1.0 else -np.inf
    rest = np.flatnonzero(~(zero | inf))
    if rest.size == 0:
        return lprod, lhaz

    use_window = n > DIRECT_MAX if window is None else window
    fn = _windowed if use_window else _direct
    lp, lh = fn(float(a0), int(n), x[rest], tail, hazard)
    lprod[rest] = lp
    if hazard:
        lhaz[rest] = lh
    return lprod, lhaz


def _direct(a0, n, x, tail, hazard):
    a = a0 + np.arange(n, dtype=float)
    lprod = np.empty_like(x)
    lhaz = np.empty_like(x) if hazard else None
    step = max(1, _BLOCK // n)
    for s in range(0, x.size, step):
        xb = x[s : s + step]
        A = a[:, None]
        X = np.broadcast_to(xb[None, :], (n, xb.size))
        lnp, lnq = _tails(A, X)
        t = lnp if tail == "lower" else lnq
        lprod[s : s + step] = t.sum(axis=0)
        if hazard:
            lf = specfun.log_gamma_pdf(A, X)
            lhaz[s : s + step] = logsumexp(lf - t, axis=0)
    return lprod, lhaz


def _terms(a, x, tail):
    lnp, lnq = _tails(a, x)
    lf = specfun.log_gamma_pdf(a, x)
    t = lnp if tail == "lower" else lnq
    other = lnq if tail == "lower" else lnp
    return t, other, lf


def _windowed(a0, n, x, tail, hazard):
    m = x.size
    thr = _threshold(n)
    # index whose shape sits at the bulk of the window
    kc = np.clip(np.ceil(x - a0), 0, n - 1).astype(np.int64)
    t_c, _, lf_c = _terms(a0 + kc, x, tail)
    ref = lf_c - t_c - 60.0 - math.log(n)

    def droppable(k, xs, refs):
        t, other, lf = _terms(a0 + k, xs, tail)
        return (other < thr) & (lf - t < refs)

    # find the edge of the window by bisection; drop[lo] True, drop[hi] False
    if tail == "lower":
        lo = np.zeros(m, dtype=np.int64)
        hi = kc.copy()
        start_drop = droppable(lo, x, ref) & (hi > 0)
        edge = np.where(start_drop, -1, 0)
        act = np.flatnonzero(start_drop)
        while act.size:
            span = hi[act] - lo[act]
            done = span <= 1
            edge[act[done]] = hi[act[done]]
            act = act[~done]
            if not act.size:
                break
            mid = (lo[act] + hi[act]) // 2
            d = droppable(mid, x[act], ref[act])
            lo[act[d]] = mid[d]
            hi[act[~d]] = mid[~d]
        first, direction = edge, 1
    else:
        lo = kc.copy()
        hi = np.full(m, n - 1, dtype=np.int64)
        end_drop = droppable(hi, x, ref) & (lo < n - 1)
        edge = np.where(end_drop, -1, n - 1)
        act = np.flatnonzero(end_drop)
        # drop[hi] True, drop[lo] False
        while act.size:
            span = hi[act] - lo[act]
            done = span <= 1
            edge[act[done]] = lo[act[done]]
            act = act[~done]
            if not act.size:
                break
            mid = (lo[act] + hi[act]) // 2
            d = droppable(mid, x[act], ref[act])
            hi[act[d]] = mid[d]
            lo[act[~d]] = mid[~d]
        first, direction = edge, -1

    lprod = np.zeros(m)
    lhaz = np.full(m, -np.inf)
    offset = np.zeros(m, dtype=np.int64)
    act = np.arange(m)
    chunk = _CHUNK
    while act.size:
        j = np.arange(chunk, dtype=np.int64)
        k = first[act, None] + direction * (offset[act, None] + j[None, :])
        valid = (k >= 0) & (k < n)
        rows, cols = np.nonzero(valid)
        kk = k[rows, cols]
        xx = x[act][rows]
        if hazard:
            t, _, lf = _terms(a0 + kk, xx, tail)
        else:
            lnp, lnq = _tails(a0 + kk, xx)
            t = lnp if tail == "lower" else lnq
        tsum = np.bincount(rows, weights=t, minlength=act.size)
        lprod[act] += tsum
        if hazard:
            h = np.full(k.shape, -np.inf)
            h[rows, cols] = lf - t
            lhaz[act] = np.logaddexp(lhaz[act], logsumexp(h, axis=1))
        offset[act] += chunk
        left = np.any(valid, axis=1) & (lprod[act] > _STOP)
        last_k = first[act] + direction * (offset[act] - 1)
        left &= (last_k >= 0) & (last_k < n - 1) if direction > 0 else (last_k > 0)
        act = act[left]
    lprod[lprod <= _STOP] = -np.inf
    return lprod, (lhaz if hazard else None)


def log_annulus(a0, n, x_lo, x_hi):
    """``sum_k log(P(a0 + k, x_hi) - P(a0 + k, x_lo))`` for paired abscissae."""
    x_lo = np.atleast_1d(np.asarray(x_lo, dtype=float))
    x_hi = np.atleast_1d(np.asarray(x_hi, dtype=float))
    x_lo, x_hi = np.broadcast_arrays(x_lo, x_hi)
    a = a0 + np.arange(n, dtype=float)
    out = np.zeros(x_lo.shape)
    step = max(1, _BLOCK // n)
    for s in range(0, x_lo.size, step):
        lo = x_lo[s : s + step]
        hi = x_hi[s : s + step]
        acc = np.zeros(lo.size)
        kstep = max(1, _BLOCK // max(lo.size, 1))
        for k0 in range(0, n, kstep):
            A = a[k0 : k0 + kstep, None]
            v = specfun.log_interval_prob(A, lo[None, :], hi[None, :])
            acc += np.sum(v, axis=0)
        out[s : s + step] = acc
    return out
