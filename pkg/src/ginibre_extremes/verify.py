"""Acceptance criteria as runnable checks.

Each criterion measures one or more quantities and compares them with fixed
tolerances. :func:`run` returns one :class:`CriterionResult` per selected
criterion; ``passed`` is the conjunction of its parts.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import ginibre, induced, limits, sampling, specfun, stats
from .errors import DomainError
from .params import EnsembleParams, ScalingMode

__all__ = ["Criterion", "CriterionResult", "CRITERIA", "select", "run"]


@dataclass
class CriterionResult:
    id: int
    name: str
    measured: Dict[str, object]
    threshold: Dict[str, object]
    passed: bool
    seconds: float
    detail: str = ""

    def to_dict(self):
        return _jsonable(asdict(self))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.id:>2} {self.name}: {_short(self.measured)} vs {_short(self.threshold)}"


@dataclass
class Criterion:
    id: int
    name: str
    tags: Sequence[str]
    check: Callable[[dict], tuple]
    tolerances: dict = field(default_factory=dict)

    def run(self, overrides=None) -> CriterionResult:
        tol = dict(self.tolerances)
        tol.update(overrides or {})
        t0 = time.perf_counter()
        measured, passed, detail = self.check(tol)
        dt = time.perf_counter() - t0
        if "runtime_s" in tol:
            measured = dict(measured, runtime_s=dt)
            passed = passed and dt <= tol["runtime_s"]
        return CriterionResult(self.id, self.name, measured, tol, bool(passed), dt, detail)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _short(d):
    parts = []
    for k, v in d.items():
        if isinstance(v, float):
            parts.append(f"{k}={v:.4g}")
        elif isinstance(v, (list, tuple)) and v and isinstance(v[0], float):
            parts.append(f"{k}=[" + ", ".join(f"{x:.4g}" for x in v) + "]")
        else:
            parts.append(f"{k}={v}")
    return ", ".join(parts)


# --------------------------------------------------------------------------
# Criteria


def _c1(tol):
    p = EnsembleParams.proportional(90, 1.0 / 9.0, ScalingMode.SQRT_ONE_PLUS_ALPHA_N)
    batch = sampling.sample_extremes_gamma(p, tol["K"], tol["seed"])
    ks = stats.ks_one_sample(batch.r_max, lambda r: induced.ind_rmax_cdf(p, r))
    return {"ks": ks.statistic}, ks.statistic <= tol["ks"], ""


def _c2(tol):
    p = EnsembleParams.proportional(100, 0.1, ScalingMode.SQRT_ALPHA_N)
    batch = sampling.sample_extremes_gamma(p, tol["K"], tol["seed"])
    ks = stats.ks_one_sample(batch.r_min, lambda r: 1.0 - induced.ind_rmin_survival(p, r))
    return {"ks": ks.statistic}, ks.statistic <= tol["ks"], ""


def gumbel_sup_distance(n, alpha, edge, points=512):
    """Sup-distance on the default grid between the exact scaled CDF and its Gumbel law."""
    if edge == "outer":
        p = EnsembleParams.proportional(n, alpha, ScalingMode.SQRT_ONE_PLUS_ALPHA_N)
        law = limits.gumbel_outer(alpha, n)
        grid = np.linspace(law.mean - 6 * law.std, law.mean + 6 * law.std, points)
        exact = induced.ind_rmax_cdf(p, grid)
    else:
        p = EnsembleParams.proportional(n, alpha, ScalingMode.SQRT_ALPHA_N)
        law = limits.gumbel_inner(alpha, n)
        grid = np.linspace(law.mean - 6 * law.std, law.mean + 6 * law.std, points)
        exact = 1.0 - induced.ind_rmin_survival(p, grid)
    return float(np.max(np.abs(exact - law.cdf(grid))))


def _c3(tol):
    sizes = tol["sizes"]
    out = {}
    ok = True
    for edge in ("outer", "inner"):
        d = [gumbel_sup_distance(int(n), tol["alpha"], edge) for n in sizes]
        out[edge] = d
        mono = all(b < a for a, b in zip(d, d[1:]))
        out[f"{edge}_monotone"] = mono
        ok = ok and mono and d[-1] <= tol["sup_at_largest"]
    return out, ok, ""


def _c4(tol):
    rs = np.array(tol["r"])
    s = ginibre.rmin_survival(tol["N"], rs)
    err = np.abs((1.0 - s) - (-np.expm1(-(rs**2))))
    bound = rs**4
    return {"error": err.tolist(), "bound_r4": bound.tolist()}, bool(np.all(err <= bound)), ""


def _c5(tol):
    rs = np.array(tol["r"])
    s = ginibre.rmin_survival(tol["N"], rs)
    ratio = -np.log(s) / (rs**4 / 4.0)
    lo, hi = 1.0 - 2.0 / rs**2, 1.0 + 2.0 / rs**2
    ok = bool(np.all((ratio >= lo) & (ratio <= hi)))
    return {"ratio": ratio.tolist(), "upper": hi.tolist()}, ok, ""


def _c6(tol):
    worst = 0.0
    for n in tol["sizes"]:
        g = EnsembleParams(n)
        ind = EnsembleParams(n, rect_index=0.0)
        for law, gf, inf in (
            ("rmin-survival", ginibre.rmin_survival, induced.ind_rmin_survival),
            ("rmax-cdf", ginibre.rmax_cdf, induced.ind_rmax_cdf),
            ("rmin-pdf", ginibre.rmin_pdf, induced.ind_rmin_pdf),
            ("rmax-pdf", ginibre.rmax_pdf, induced.ind_rmax_pdf),
        ):
            grid = ginibre.default_grid(law, g, 512)
            worst = max(worst, float(np.max(np.abs(gf(g, grid) - inf(ind, grid)))))
    return {"max_abs_diff": worst}, worst <= tol["max_abs_diff"], ""


def _c7(tol):
    cases = {
        "ginibre": EnsembleParams(tol["N"], scaling=ScalingMode.SQRT_N),
        "induced": EnsembleParams.proportional(tol["N"], tol["alpha"], ScalingMode.SQRT_ALPHA_N),
    }
    out = {}
    ok = True
    for name, p in cases.items():
        pearson_ok = gap_ok = 0
        worst_r = worst_gap = 0.0
        for i in range(tol["seeds"]):
            batch = sampling.sample_extremes_gamma(p, tol["K"], tol["seed0"] + i)
            rep = stats.independence_check(batch)
            pearson_ok += abs(rep.pearson_r) <= tol["pearson"]
            gap_ok += rep.joint_sup_gap <= tol["gap"]
            worst_r = max(worst_r, abs(rep.pearson_r))
            worst_gap = max(worst_gap, rep.joint_sup_gap)
        rate_r = pearson_ok / tol["seeds"]
        rate_g = gap_ok / tol["seeds"]
        out[f"{name}_pearson_pass_rate"] = rate_r
        out[f"{name}_gap_pass_rate"] = rate_g
        out[f"{name}_max_abs_pearson"] = worst_r
        out[f"{name}_max_gap"] = worst_gap
        ok = ok and rate_r >= tol["rate"] and rate_g >= tol["rate"]
    return out, ok, ""


def _c8(tol):
    mat = sampling.sample_extremes_matrix(tol["N"], tol["K"], tol["seed"])
    gam = sampling.sample_extremes_gamma(tol["N"], tol["K"], tol["seed"] + 1)
    d_max = stats.ks_two_sample(mat.r_max, gam.r_max).statistic
    d_min = stats.ks_two_sample(mat.r_min, gam.r_min).statistic
    ok = d_max <= tol["ks"] and d_min <= tol["ks"]
    return {"ks_rmax": d_max, "ks_rmin": d_min}, ok, ""


def special_function_lattice():
    a = np.geomspace(1e-2, 1e7, 100)
    t = np.geomspace(1e-3, 1e2, 100)
    return a[:, None], a[:, None] * t[None, :]


def _rel_agree(la, lb):
    """Relative disagreement of two log-values; log-relative where they underflow."""
    la, lb = np.broadcast_arrays(la, lb)
    both_inf = np.isneginf(la) & np.isneginf(lb)
    rep = np.maximum(la, lb) > specfun.UNDERFLOW_LOG
    with np.errstate(invalid="ignore"):
        d = np.abs(la - lb)
        val_rel = np.abs(np.expm1(d))
        log_rel = d / np.maximum(1.0, np.abs(lb))
    out = np.where(rep, val_rel, log_rel)
    return np.where(both_inf, 0.0, out)


def _c9(tol):
    a, x = special_function_lattice()
    p = specfun.reg_lower_gamma(a, x)
    q = specfun.reg_upper_gamma(a, x)
    sum_err = float(np.max(np.abs(p + q - 1.0)))

    dual = 0.0
    for av in np.geomspace(1e4, 1e7, 13):
        xs = av * np.linspace(0.5, 2.0, 31)
        it = specfun.log_gamma_tails(av, xs, method="iterative")
        tm = specfun.log_gamma_tails(av, xs, method="temme")
        dual = max(dual, float(np.max(_rel_agree(tm[0], it[0]))), float(np.max(_rel_agree(tm[1], it[1]))))

    rec = 0.0
    for av in range(1, 51):
        for xv in (0.1, 1.0, 10.0, 50.0):
            lhs = specfun.reg_upper_gamma(av + 1, xv)
            step = math.exp(av * math.log(xv) - xv - specfun.log_gamma(av + 1.0))
            rhs = specfun.reg_upper_gamma(av, xv) + step
            rec = max(rec, abs(lhs - rhs) / abs(rhs))
    ok = sum_err <= tol["sum"] and dual <= tol["dual"] and rec <= tol["recurrence"]
    return {"sum": sum_err, "dual": dual, "recurrence": rec}, ok, ""


def _c10(tol):
    worst = 0.0
    for n in tol["sizes"]:
        for s in tol["s"]:
            lhs = ginibre.rmin_survival(n, s)
            rhs = math.exp(-s * s) * ginibre.conditional_hole_prob(n, s)
            worst = max(worst, abs(lhs - rhs))
    return {"max_abs_diff": worst}, worst <= tol["max_abs_diff"], ""


def _c11(tol):
    n, lam = tol["N"], tol["lam"]
    p = EnsembleParams(n, scaling=ScalingMode.SQRT_N)
    ratio = math.log(ginibre.rmin_survival(p, lam)) / limits.ldp_log_survival(n, lam)
    homo_n = limits.ldp_log_survival(2 * n, lam) / limits.ldp_log_survival(n, lam)
    homo_l = limits.ldp_log_survival(n, 0.5) / limits.ldp_log_survival(n, 0.25)
    homo = homo_n == 4.0 and homo_l == 16.0
    ok = tol["lo"] <= ratio <= tol["hi"] and homo
    return {"ratio": ratio, "homogeneity_exact": homo}, ok, ""


def _c12(tol):
    rs = np.array(tol["r"])
    exact = induced.ind_rmin_pdf(EnsembleParams(tol["N"], rect_index=1.0), rs)
    approx = limits.tail_rmin_generalized_gamma(rs)
    rel = np.abs(exact - approx) / exact
    bound = 5.0 * rs**4 + 1e-6
    return {"rel_error": rel.tolist(), "bound": bound.tolist()}, bool(np.all(rel <= bound)), ""


CRITERIA: List[Criterion] = [
    Criterion(1, "outer-edge sample overlay", ("samples", "figures"), _c1,
              {"K": 10_000, "seed": 20_001, "ks": 0.02, "runtime_s": 10.0}),
    Criterion(2, "inner-edge sample overlay", ("samples", "figures"), _c2,
              {"K": 10_000, "seed": 20_002, "ks": 0.02, "runtime_s": 10.0}),
    Criterion(3, "Gumbel convergence", ("gumbel", "slow", "figures"), _c3,
              {"alpha": 1.0, "sizes": [1_000, 100_000, 10_000_000], "sup_at_largest": 0.05,
               "runtime_s": 600.0}),
    Criterion(4, "Rayleigh left tail", ("tails",), _c4,
              {"N": 500, "r": [0.05, 0.1, 0.2]}),
    Criterion(5, "Weibull right tail", ("tails",), _c5,
              {"N": 2000, "r": [2.5, 3.0]}),
    Criterion(6, "L=0 reduction", ("exact",), _c6,
              {"sizes": [10, 100], "max_abs_diff": 1e-12}),
    Criterion(7, "independence of extremes", ("samples", "independence"), _c7,
              {"N": 200, "alpha": 2.0, "K": 10_000, "seeds": 20, "seed0": 70_000,
               "pearson": 0.03, "gap": 0.025, "rate": 0.95}),
    Criterion(8, "sampler equivalence", ("samples",), _c8,
              {"N": 50, "K": 2000, "seed": 80_000, "ks": 0.05}),
    Criterion(9, "special-function identities", ("specfun",), _c9,
              {"sum": 1e-13, "dual": 1e-10, "recurrence": 1e-12}),
    Criterion(10, "conditional hole identity", ("exact",), _c10,
              {"sizes": [2, 10, 100], "s": [0.1, 0.5, 1.0, 2.0], "max_abs_diff": 1e-12}),
    Criterion(11, "large deviations", ("tails",), _c11,
              {"N": 200, "lam": 0.5, "lo": 0.9, "hi": 1.1}),
    Criterion(12, "generalized Gamma at L=1", ("tails",), _c12,
              {"N": 500, "r": [0.05, 0.1, 0.2]}),
]


def select(only: Optional[Iterable[str]] = None) -> List[Criterion]:
    """Criteria matching any of the ids or tags in ``only`` (all when empty)."""
    if not only:
        return list(CRITERIA)
    tokens = []
    for item in only:
        tokens.extend(t.strip() for t in str(item).split(",") if t.strip())
    chosen = []
    known_tags = {t for c in CRITERIA for t in c.tags}
    for t in tokens:
        if not (t.isdigit() and any(c.id == int(t) for c in CRITERIA)) and t not in known_tags:
            raise DomainError(f"unknown criterion selector {t!r}")
    for c in CRITERIA:
        if any((t.isdigit() and int(t) == c.id) or t in c.tags for t in tokens):
            chosen.append(c)
    return chosen


def run(only=None, overrides=None, progress=None) -> List[CriterionResult]:
    """Run the selected criteria; ``overrides`` maps criterion id to tolerance updates."""
    overrides = overrides or {}
    results = []
    for c in select(only):
        res = c.run(overrides.get(c.id))
        if progress is not None:
            progress(res)
        results.append(res)
    return results
