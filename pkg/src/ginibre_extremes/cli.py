"""Command-line interface.

Subcommands::

    eval     exact or asymptotic curve -> CSV (r,value)
    sample   Monte Carlo extremes -> CSV (r_min,r_max)
    verify   acceptance criteria -> JSON (or CSV) report
    figure   CSV bundle reproducing one of the figure configurations

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical integrity error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__, _exact, ginibre, induced, limits, sampling, verify
from .errors import DomainError, IntegrityError
from .params import EnsembleParams, ScalingMode

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_LAWS = (
    "rmin-survival", "rmin-pdf", "rmax-cdf", "rmax-pdf",
    "joint", "hole", "gumbel", "tail-left", "tail-right", "ldp",
)
FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")
DEFAULT_POINTS = 512
FIGURE_SEED = 1


class ConfigError(Exception):
    pass


@dataclass
class Grid:
    lo: Optional[float]
    hi: Optional[float]
    points: int

    @property
    def auto(self) -> bool:
        return self.lo is None

    def values(self):
        return np.linspace(self.lo, self.hi, self.points)


def parse_grid(spec: str) -> Grid:
    if spec is None or spec == "auto":
        return Grid(None, None, DEFAULT_POINTS)
    parts = spec.split(":")
    if len(parts) == 2 and parts[0] == "auto":
        return Grid(None, None, _points(parts[1]))
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'min:max:points' or 'auto', got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"bad grid bounds in {spec!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ConfigError("grid needs finite min < max")
    return Grid(lo, hi, _points(parts[2]))


def _points(s):
    try:
        n = int(s)
    except ValueError:
        raise ConfigError(f"grid points must be an integer, got {s!r}") from None
    if n < 2:
        raise ConfigError("grid needs at least 2 points")
    return n


def _ratio(s: str) -> float:
    """Accept decimals and fractions such as ``1/9``."""
    try:
        return float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None


@dataclass
class RunConfig:
    subcommand: str
    ensemble: str = "ginibre"
    n: Optional[int] = None
    alpha: Optional[float] = None
    rect_index: Optional[float] = None
    scaling: ScalingMode = ScalingMode.NONE
    law: Optional[str] = None
    grid: Grid = None
    upper: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    method: str = "gamma"
    out: Optional[str] = None
    fmt: str = "csv"
    only: Optional[List[str]] = None
    figure: Optional[str] = None

    def params(self) -> EnsembleParams:
        if self.ensemble == "ginibre":
            return EnsembleParams(self.n, scaling=self.scaling)
        if self.alpha is not None:
            return EnsembleParams.proportional(self.n, self.alpha, self.scaling)
        return EnsembleParams(self.n, rect_index=self.rect_index, scaling=self.scaling)

    def validate(self):
        if self.subcommand in ("eval", "sample"):
            if self.n is None:
                raise ConfigError("--n is required")
            if self.ensemble == "ginibre":
                if self.alpha is not None or self.rect_index is not None:
                    raise ConfigError("--alpha/--rect-index are not accepted for the ginibre ensemble")
            else:
                if (self.alpha is None) == (self.rect_index is None):
                    raise ConfigError("induced ensemble needs exactly one of --alpha / --rect-index")
            try:
                self.params()
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        if self.subcommand == "eval":
            self._validate_eval()
        if self.subcommand == "sample":
            if self.samples is None or self.samples < 1:
                raise ConfigError("--samples K >= 1 is required")
            if self.method == "matrix" and (self.ensemble != "ginibre" or self.n > sampling.MATRIX_MAX_N):
                raise ConfigError(f"matrix sampler needs the ginibre ensemble and N <= {sampling.MATRIX_MAX_N}")
        if self.subcommand == "verify":
            try:
                verify.select(self.only)
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        if self.seed is not None and not (0 <= self.seed < 2**64):
            raise ConfigError("--seed must be in [0, 2**64)")

    def _validate_eval(self):
        law = self.law
        if law not in EVAL_LAWS:
            raise ConfigError(f"--law must be one of {', '.join(EVAL_LAWS)}")
        p = self.params()
        if law == "joint" and self.upper is None:
            raise ConfigError("law 'joint' needs --upper R (outer radius)")
        if law in ("hole", "ldp") and self.ensemble != "ginibre":
            raise ConfigError(f"law {law!r} is defined for the ginibre ensemble only")
        if law == "hole" and p.n < 2:
            raise ConfigError("law 'hole' needs N >= 2")
        if law in ("hole", "tail-left", "tail-right") and p.scaling is not ScalingMode.NONE:
            raise ConfigError(f"law {law!r} is defined for unscaled radii (--scaling none)")
        if law == "gumbel":
            want = {"ginibre": (ScalingMode.SQRT_N,),
                    "induced": (ScalingMode.SQRT_ALPHA_N, ScalingMode.SQRT_ONE_PLUS_ALPHA_N)}
            if p.scaling not in want[self.ensemble]:
                raise ConfigError("law 'gumbel' needs --scaling sqrt-n (ginibre) or inner/outer (induced)")
        g = self.grid
        if not g.auto:
            if law in ("rmin-pdf", "rmax-pdf") and g.lo <= 0:
                raise ConfigError("density grids must start above 0")
            if law == "tail-right" and g.lo <= 1:
                raise ConfigError("law 'tail-right' needs a grid above r = 1")
            if law == "ldp" and (g.lo <= 0 or g.hi > 1):
                raise ConfigError("law 'ldp' needs a grid inside (0, 1]")
            if law != "ldp" and g.lo < 0:
                raise ConfigError("grid must be non-negative")
            if law == "joint" and g.hi > self.upper:
                raise ConfigError("joint grid (inner radius) must not exceed --upper")


# --------------------------------------------------------------------------
# Output


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _meta_lines(meta: dict) -> List[str]:
    lines = [f"# tool: ginibre-extremes {__version__}"]
    for k, v in meta.items():
        if isinstance(v, dict):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"# {k}: {v}")
    return lines


def write_csv(path, meta, header, columns):
    lines = _meta_lines(meta)
    lines.append(",".join(header))
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        d = os.path.dirname(path)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _err(msg):
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# eval


def _gumbel_for(p: EnsembleParams):
    if p.scaling is ScalingMode.SQRT_N:
        return limits.gumbel_ginibre_rmax(p.n)
    if p.scaling is ScalingMode.SQRT_ONE_PLUS_ALPHA_N:
        return limits.gumbel_outer(p.rect_index / p.n, p.n)
    return limits.gumbel_inner(p.rect_index / p.n, p.n)


def _auto_grid(cfg: RunConfig, p: EnsembleParams, points: int):
    law = cfg.law
    if law in ("rmin-survival", "rmin-pdf", "hole"):
        return _exact.default_grid(p, "min", points)
    if law in ("rmax-cdf", "rmax-pdf"):
        return _exact.default_grid(p, "max", points)
    if law == "gumbel":
        g = _gumbel_for(p)
        return np.linspace(g.mean - 6 * g.std, g.mean + 6 * g.std, points)
    if law == "joint":
        return np.linspace(0.0, cfg.upper, points)
    if law == "tail-left":
        return np.linspace(0.0, 1.0, points)
    if law == "tail-right":
        return np.linspace(1.5, 4.0, points)
    return np.linspace(1.0 / points, 1.0, points)  # ldp


def evaluate(cfg: RunConfig):
    """Return ``(grid, values, extra_meta)`` for an eval config."""
    p = cfg.params()
    grid = cfg.grid.values() if not cfg.grid.auto else _auto_grid(cfg, p, cfg.grid.points)
    law = cfg.law
    extra = {}
    if law in _exact.LAWS:
        vals = _exact.make_curve(law, p, grid).values
    elif law == "joint":
        vals = _exact.annulus(p, grid, cfg.upper)
        extra["upper"] = cfg.upper
    elif law == "hole":
        vals = ginibre.conditional_hole_prob(p.n, grid)
    elif law == "gumbel":
        g = _gumbel_for(p)
        if g.orientation == "max":
            vals = g.cdf(grid)
            extra["values"] = "Gumbel CDF of the scaled maximum"
        else:
            vals = g.survival(grid)
            extra["values"] = "Gumbel survival of the scaled minimum"
        extra["gumbel"] = {"location": g.location, "scale": g.scale, "gamma": g.gamma_alpha_n}
    elif law == "tail-left":
        vals = limits.tail_rmin_left(p.rect_index, grid)
    elif law == "tail-right":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            vals = limits.tail_rmin_right(p.rect_index, grid)
        if caught:
            extra["warning"] = str(caught[0].message)
            _err(f"warning: {caught[0].message}")
    else:
        vals = limits.ldp_log_survival(p.n, grid)
    return np.asarray(grid, dtype=float), np.atleast_1d(np.asarray(vals, dtype=float)), extra


def cmd_eval(cfg: RunConfig) -> int:
    p = cfg.params()
    grid, vals, extra = evaluate(cfg)
    _err(f"params: {json.dumps(p.describe(), sort_keys=True)}")
    _err(f"grid: {_fmt(grid[0])}:{_fmt(grid[-1])}:{grid.size}")
    meta = {"command": "eval", "law": cfg.law, "ensemble": cfg.ensemble, "params": p.describe()}
    meta.update(extra)
    write_csv(cfg.out, meta, ["r", "value"], [grid, vals])
    return EXIT_OK


# --------------------------------------------------------------------------
# sample


def _sample(p, k, seed, method):
    if method == "matrix":
        return sampling.sample_extremes_matrix(p, k, seed)
    return sampling.sample_extremes_gamma(p, k, seed)


def cmd_sample(cfg: RunConfig) -> int:
    p = cfg.params()
    batch = _sample(p, cfg.samples, cfg.seed, cfg.method)
    if cfg.seed is None:
        _err(f"seed: {batch.seed}")
    _err(f"params: {json.dumps(p.describe(), sort_keys=True)}")
    meta = {"command": "sample", "ensemble": cfg.ensemble, "method": cfg.method,
            "params": p.describe(), "seed": batch.seed, "samples": batch.count}
    write_csv(cfg.out, meta, ["r_min", "r_max"], [batch.r_min, batch.r_max])
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def cmd_verify(cfg: RunConfig, overrides=None) -> int:
    results = verify.run(cfg.only, overrides=overrides, progress=lambda r: _err(r.line()))
    ok = all(r.passed for r in results)
    if cfg.fmt == "json":
        text = json.dumps({"passed": ok, "criteria": [r.to_dict() for r in results]}, indent=2) + "\n"
        if cfg.out is None or cfg.out == "-":
            sys.stdout.write(text)
        else:
            with open(cfg.out, "w") as fh:
                fh.write(text)
    else:
        write_csv(cfg.out, {"command": "verify"}, ["id", "passed", "seconds"],
                  [[r.id for r in results], [int(r.passed) for r in results], [r.seconds for r in results]])
    return EXIT_OK if ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# figure

# Captions write sizes as "10eK"; they are read as 10**K.
_FIG_SPECS = {
    "fig1": {"edge": "outer", "n": 90, "alpha": "1/9", "panel_alphas": ["1/90", "1/9", "4/9"], "samples": 10_000},
    "fig2": {"edge": "outer", "n": 90, "alpha": "1/9", "panel_alphas": ["1/9"], "samples": 10_000},
    "fig3": {"edge": "outer", "alpha": "1", "sizes": {"10e3": 10**3, "10e4": 10**4, "10e7": 10**7}},
    "fig4": {"edge": "inner", "n": 100, "alpha": "1/10", "panel_alphas": ["1/100", "1/10", "4/10"], "samples": 10_000},
    "fig5": {"edge": "inner", "n": 100, "alpha": "1/10", "panel_alphas": ["1/10"], "samples": 10_000,
             "limit_sizes": {"10e4": 10**4, "2 x 10e4": 2 * 10**4}},
    "fig6": {"edge": "inner", "alpha": "1", "sizes": {"10e5": 10**5, "10e6": 10**6, "10e7": 10**7}},
}


def _edge_params(n, alpha, edge):
    mode = ScalingMode.SQRT_ONE_PLUS_ALPHA_N if edge == "outer" else ScalingMode.SQRT_ALPHA_N
    return EnsembleParams.proportional(n, alpha, mode)


def _edge_law(n, alpha, edge):
    return limits.gumbel_outer(alpha, n) if edge == "outer" else limits.gumbel_inner(alpha, n)


def cmd_figure(cfg: RunConfig) -> int:
    fig = cfg.figure
    spec = _FIG_SPECS[fig]
    out_dir = cfg.out or fig
    os.makedirs(out_dir, exist_ok=True)
    edge = spec["edge"]
    pdf_law = "rmax-pdf" if edge == "outer" else "rmin-pdf"
    cdf_law = "rmax-cdf" if edge == "outer" else "rmin-survival"
    written = []

    def emit(name, meta, header, cols):
        path = os.path.join(out_dir, f"{fig}_{name}.csv")
        write_csv(path, dict({"command": "figure", "figure": fig}, **meta), header, cols)
        written.append(path)

    if "sizes" in spec:
        alpha = float(Fraction(spec["alpha"]))
        for label, n in spec["sizes"].items():
            p = _edge_params(n, alpha, edge)
            law = _edge_law(n, alpha, edge)
            grid = np.linspace(law.mean - 6 * law.std, law.mean + 6 * law.std, cfg.grid.points)
            exact = _exact.make_curve(cdf_law, p, grid).values
            if edge == "inner":
                exact = 1.0 - exact
            meta = {"params": p.describe(), "caption_size": label, "resolved_n": n,
                    "values": f"CDF of the scaled {'maximum' if edge == 'outer' else 'minimum'}"}
            emit(f"exact_cdf_n{n}", meta, ["r", "value"], [grid, exact])
            ameta = dict(meta, law="gumbel", gumbel={"location": law.location, "scale": law.scale})
            emit(f"gumbel_cdf_n{n}", ameta, ["r", "value"], [grid, law.cdf(grid)])
    else:
        n = spec["n"]
        seed = FIGURE_SEED if cfg.seed is None else cfg.seed
        for a_str in spec["panel_alphas"]:
            alpha = float(Fraction(a_str))
            p = _edge_params(n, alpha, edge)
            curve = _exact.make_curve(pdf_law, p, None, cfg.grid.points)
            tag = a_str.replace("/", "over")
            emit(f"exact_pdf_alpha{tag}", {"params": p.describe(), "alpha": a_str, "law": pdf_law},
                 ["r", "value"], [curve.grid, curve.values])
        alpha = float(Fraction(spec["alpha"]))
        p = _edge_params(n, alpha, edge)
        batch = sampling.sample_extremes_gamma(p, spec["samples"], seed)
        emit("samples", {"params": p.describe(), "seed": seed, "samples": batch.count},
             ["r_min", "r_max"], [batch.r_min, batch.r_max])
        for label, nl in spec.get("limit_sizes", {}).items():
            law = _edge_law(nl, alpha, edge)
            grid = np.linspace(law.mean - 6 * law.std, law.mean + 6 * law.std, cfg.grid.points)
            emit(f"gumbel_pdf_n{nl}", {"caption_size": label, "resolved_n": nl, "alpha": spec["alpha"],
                                       "gumbel": {"location": law.location, "scale": law.scale}},
                 ["r", "value"], [grid, law.pdf(grid)])
    for path in written:
        _err(f"wrote {path}")
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _err(f"{self.prog}: error: {message}")
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ginibre-extremes", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def ensemble_args(sp):
        sp.add_argument("--ensemble", choices=("ginibre", "induced"), default="ginibre")
        sp.add_argument("--n", type=int, help="matrix size N")
        grp = sp.add_mutually_exclusive_group()
        grp.add_argument("--alpha", type=_ratio, help="ratio with L = alpha N (accepts 1/9)")
        grp.add_argument("--rect-index", type=float, dest="rect_index", help="rectangularity index L")
        sp.add_argument("--scaling", choices=[m.value for m in ScalingMode], default="none")
        sp.add_argument("--out", help="output file (default: stdout)")

    ev = sub.add_parser("eval", help="evaluate a law on a grid")
    ensemble_args(ev)
    ev.add_argument("--law", required=True, choices=EVAL_LAWS)
    ev.add_argument("--grid", default="auto", help="min:max:points or auto (default)")
    ev.add_argument("--upper", type=float, help="outer radius R for law 'joint'")
    ev.add_argument("--format", dest="fmt", choices=("csv",), default="csv")

    sa = sub.add_parser("sample", help="Monte Carlo draws of (r_min, r_max)")
    ensemble_args(sa)
    sa.add_argument("--samples", type=int, required=True, help="number of draws K")
    sa.add_argument("--seed", type=int, help="64-bit seed (random and printed when omitted)")
    sa.add_argument("--method", choices=("gamma", "matrix"), default="gamma")
    sa.add_argument("--format", dest="fmt", choices=("csv",), default="csv")

    ve = sub.add_parser("verify", help="run the acceptance criteria")
    ve.add_argument("--only", action="append", help="criterion ids or tags, comma separated")
    ve.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    ve.add_argument("--out", help="report file (default: stdout)")

    fi = sub.add_parser("figure", help="CSV bundle for a figure configuration")
    fi.add_argument("figure", choices=FIGURES)
    fi.add_argument("--out", help="output directory (default: ./<figure id>)")
    fi.add_argument("--seed", type=int, help=f"seed for the sample CSV (default {FIGURE_SEED})")
    fi.add_argument("--grid", default="auto", help="auto or auto:points")
    return parser


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    for name in ("ensemble", "n", "alpha", "rect_index", "law", "upper", "samples", "seed",
                 "method", "out", "fmt", "only", "figure"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "scaling"):
        cfg.scaling = ScalingMode.parse(ns.scaling)
    cfg.grid = parse_grid(getattr(ns, "grid", None))
    if cfg.subcommand == "figure" and not cfg.grid.auto:
        raise ConfigError("figure bundles take --grid auto or auto:points")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        cfg.validate()
        handler = {"eval": cmd_eval, "sample": cmd_sample, "verify": cmd_verify, "figure": cmd_figure}
        return handler[cfg.subcommand](cfg)
    except (ConfigError, DomainError) as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG
    except (IntegrityError, FloatingPointError) as exc:
        _err(f"numerical integrity error: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
