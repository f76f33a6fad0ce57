"""Command-line front end.

Exit codes: 0 when every gating claim holds, 1 when a canonical claim is
violated, 2 for usage or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds_ccdp_es as es
from . import bounds_wrdp as wr
from . import bounds_wsfd as ws
from . import gaussian_oracle as go
from . import lindet as ld
from .channel_model import cov_ccdp_es, cov_wrdp, cov_wsfd
from .errors import CcdpError, ConditionViolation
from .harness import grid as hg
from .harness import sweeps as hs
from .harness.lemmas import lemma_validation
from .harness.report import emit_report
from .harness.strong import random_strong_specs
from .rates import CANONICAL, PRINTED, RateBound

EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2
MODELS = ("wrdp", "wsfd", "ccdp-es", "ccdp-uneq", "wffd", "lapidoth", "strong")


class UsageError(CcdpError):
    pass


@dataclass
class CliConfig:
    command: str
    model: str | None = None
    P: float | None = None
    c2: float | None = None
    M: int | None = None
    a: list | None = None
    rho: float | None = None
    Q: float | None = None
    gamma: float | None = None
    alpha: float | None = None
    k: float | None = None
    grid: str | None = None
    out: str | None = None
    format: str = "json"
    seed: int = 7
    n: int = 100_000
    printed: bool = False


def sig10(obj):
    """Round every float to 10 significant digits for stable, readable output."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.10g}")
    if isinstance(obj, dict):
        return {k: sig10(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sig10(v) for v in obj]
    if isinstance(obj, np.generic):
        return sig10(obj.item())
    return obj


def dump(obj, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(sig10(obj), indent=1) + "\n")


def _bound(b: RateBound) -> dict:
    d = {"value": b.value, "branch": b.branch, "source": b.source}
    if b.raw is not None and b.raw != b.value:
        d["raw"] = b.raw
    return d


def _parse_a(text: str | None) -> list | None:
    if text is None:
        return None
    try:
        vals = [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise UsageError(f"--a expects comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("--a is empty")
    return vals


def _need(cfg: CliConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command} --model {cfg.model} needs " + ", ".join("--" + m for m in missing))


def _c(cfg: CliConfig) -> float:
    if cfg.c2 < 0:
        raise UsageError(f"--c2 must be >= 0, got {cfg.c2}")
    return math.sqrt(cfg.c2)


# -- bounds -------------------------------------------------------------------------


def cmd_bounds(cfg: CliConfig) -> int:
    _need(cfg, "model", "P", "c2")
    P, c = cfg.P, _c(cfg)
    M = cfg.M or 2
    rec = {"model": cfg.model, "P": P, "c2": cfg.c2, "M": M}
    inner = outer = None
    extra = {}
    if cfg.model == "wrdp":
        if M == 2:
            inner, outer = wr.wrdp_inner_2(P, c), wr.wrdp_outer_2(P, c)
            if cfg.alpha is not None:
                extra["inner_param"] = _bound(wr.wrdp_inner_param_2(P, c, cfg.alpha))
            extra["alpha_star"] = wr.wrdp_alpha_star_2(P, c)
        else:
            inner, outer = wr.wrdp_inner_M(P, c, M), wr.wrdp_outer_M(P, c, M, CANONICAL)
            extra["outer_printed"] = _bound(wr.wrdp_outer_M(P, c, M, PRINTED))
            if cfg.alpha is not None:
                extra["inner_param"] = _bound(wr.wrdp_inner_param_M(P, c, M, cfg.alpha))
            extra["alpha_bar_star"] = wr.wrdp_alpha_star_M(P, c, M)
    elif cfg.model == "wsfd":
        _need(cfg, "a")
        a = cfg.a if len(cfg.a) > 1 else [1.0, cfg.a[0]]
        rec["a"] = a
        rec["M"] = M = len(a)
        if M == 2 and a[0] == 1.0:
            a2 = a[1]
            inner, outer = ws.wsfd_inner_2(P, c, a2), ws.wsfd_outer_canonical_2(P, c, a2)
            extra["outer_raw"] = _bound(ws.wsfd_outer_raw_2(P, c, a2))
            if abs(a2) >= 1.0:
                extra["outer_printed"] = _bound(ws.wsfd_outer_2(P, c, a2))
            if cfg.alpha is not None:
                extra["inner_rcr"] = _bound(ws.wsfd_inner_rcr_2(P, c, a2, cfg.alpha))
        else:
            inner = ws.wsfd_inner_timeshare(P, M)
            if cfg.gamma is None:
                chk = ws.strong_fading_check(P, c, a)
                outer = ws.wsfd_outer_strong(P, M)
            else:
                chk = ws.strong_fading_check_v2(P, c, a, cfg.gamma)
                outer = ws.wsfd_outer_strong_v2(P, M, cfg.gamma)
            extra["strong_fading"] = {"passed": chk.passed, "violated": chk.violated}
    elif cfg.model == "ccdp-es":
        _need(cfg, "rho")
        rec["rho"] = cfg.rho
        if M == 2:
            inner, outer = es.ccdpes_inner_2(P, c, cfg.rho), es.ccdpes_outer_2(P, c, cfg.rho, CANONICAL)
            extra["outer_printed"] = _bound(es.ccdpes_outer_2(P, c, cfg.rho, PRINTED))
            extra["outer_substituted"] = _bound(es.ccdpes_outer_2(P, c, cfg.rho, es.SUBSTITUTED))
        else:
            inner, outer = es.ccdpes_inner_M(P, c, cfg.rho, M), es.ccdpes_outer_M(P, c, cfg.rho, M, CANONICAL)
            extra["outer_printed"] = _bound(es.ccdpes_outer_M(P, c, cfg.rho, M, PRINTED))
    elif cfg.model == "ccdp-uneq":
        _need(cfg, "Q")
        rec["Q"] = cfg.Q
        inner, outer = es.ccdp_unequal_inner_2(P, c, cfg.Q), es.ccdp_unequal_outer_2(P, c, cfg.Q)
    elif cfg.model == "wffd":
        outer = ws.wffd_outer_antipodal(P, c)
    elif cfg.model == "lapidoth":
        if M == 2:
            inner, outer = wr.lapidoth_inner_2(P, c), wr.lapidoth_outer_2(P, c)
        else:
            outer = wr.lapidoth_outer_M(P, c, M)
    else:
        raise UsageError(f"bounds does not support --model {cfg.model}")
    rec["inner"] = None if inner is None else _bound(inner)
    rec["outer"] = None if outer is None else _bound(outer)
    rec["gap"] = None if inner is None or outer is None else outer.value - inner.value
    rec.update(extra)
    dump(rec)
    return EXIT_OK


# -- sweep / gap ------------------------------------------------------------------


def _grid(cfg: CliConfig, model: str):
    return hg.load_grid(cfg.grid) if cfg.grid else hg.default_grid(model)


def _reports(cfg: CliConfig) -> list:
    model = cfg.model
    form = PRINTED if cfg.printed else CANONICAL
    if model == "wrdp":
        g = _grid(cfg, "wrdp-M")
        Ms = [cfg.M] if cfg.M else hg.as_int_list(g.get("M", [2]), "M")
        reps = []
        if 2 in Ms and not cfg.printed:
            reps.append(hs.gap_sweep_wrdp2(g))
        others = [m for m in Ms if m != 2] if not cfg.printed else Ms
        if others or cfg.printed or cfg.M:
            reps.append(hs.gap_sweep_wrdpM(g, Ms, form))
        return reps
    if model == "wsfd":
        g = _grid(cfg, "wsfd")
        return [hs.gap_sweep_wsfd2(g)]
    if model == "ccdp-es":
        g = _grid(cfg, "ccdp-es")
        return hs.gap_sweep_ccdpes(g, [cfg.M] if cfg.M else None, form)
    if model == "ccdp-uneq":
        return [hs.gap_sweep_unequal(_grid(cfg, "ccdp-uneq"))]
    if model == "strong":
        return [hs.gap_sweep_strong(_strong_specs(cfg))]
    raise UsageError(f"sweeps support --model wrdp, wsfd, ccdp-es, ccdp-uneq, strong; got {cfg.model}")


def _strong_specs(cfg: CliConfig) -> list:
    """Specs from a grid file (every P, c2 pair with the fading vector on the ``a`` axis) or a seeded random family."""
    if not cfg.grid:
        return random_strong_specs(cfg.seed, 100, v2=cfg.gamma is not None)
    g = hg.load_grid(cfg.grid)
    a = tuple(float(v) for v in g["a"])
    return [hs.StrongSpec(float(P), math.sqrt(float(c2)), a, cfg.gamma) for P in g["P"] for c2 in g["c2"]]


def _write_reports(cfg: CliConfig, reports: list) -> None:
    if cfg.out is None:
        for r in reports:
            sys.stdout.write(emit_report(r, cfg.format, None))
        return
    stem, ext = os.path.splitext(cfg.out)
    ext = ext or "." + cfg.format
    for r in reports:
        path = cfg.out if len(reports) == 1 else f"{stem}.{r.theorem}{ext}"
        emit_report(r, cfg.format, path)


def cmd_sweep(cfg: CliConfig) -> int:
    _need(cfg, "model")
    reports = _reports(cfg)
    _write_reports(cfg, reports)
    if cfg.out is not None:
        dump([r.summary() for r in reports])
    return EXIT_OK


def cmd_gap(cfg: CliConfig) -> int:
    _need(cfg, "model")
    reports = _reports(cfg)
    if cfg.out is not None:
        _write_reports(cfg, reports)
    dump([r.summary() for r in reports])
    failed = [r for r in reports if r.gating and not r.passed]
    return EXIT_CLAIM if failed else EXIT_OK


# -- oracle / lindet / simulate ------------------------------------------------------


def cmd_oracle(cfg: CliConfig) -> int:
    _need(cfg, "P", "c2")
    P, c = cfg.P, _c(cfg)
    model = cfg.model or "wdp"
    if model == "wsfd":
        _need(cfg, "a")
        a = cfg.a[-1]
        alphas = np.linspace(0.0, 1.0, 101)
        ks = np.linspace(-1.0, 2.0, 1201)
        rate, al, k = go.optimize_inner_2wsfd(P, c, a, alphas, ks)
        rcr, rcr_alpha = ws.rcr_grid(P, c, a)
        dump({"model": "wsfd", "P": P, "c2": cfg.c2, "a": a, "best": {"alpha": al, "k": k, "rate": rate},
              "closed_form_rcr": {"alpha": rcr_alpha, "rate": max(rcr, 0.0)},
              "alpha_points": int(alphas.size), "k_points": int(ks.size)})
        return EXIT_OK
    alpha = 1.0 if cfg.alpha is None else cfg.alpha
    k = go.costa_k(P, alpha) if cfg.k is None else cfg.k
    r = go.gp_rate_gaussian(P, c, go.LinearAssignment(k, alpha))
    dump({"model": "wdp", "P": P, "c2": cfg.c2, "alpha": alpha, "k": k, "rate": r,
          "p2p_capacity": 0.5 * math.log2(1.0 + P)})
    return EXIT_OK


def cmd_lindet(cfg: CliConfig) -> int:
    _need(cfg, "P", "a")
    if cfg.c2 is None:
        raise UsageError("lindet needs --c or --c2")
    c = _c(cfg)
    a = cfg.a
    spec = ld.lindet_params(cfg.P, c, a)
    ov = ld.lindet_overlap(spec)
    lines = [ld.lindet_diagram(spec).rstrip("\n")]
    lines.append(f"n_p={spec.n_p} n_a={list(spec.n_a)} k={spec.k}")
    for m, w in enumerate(ov.windows):
        lines.append(f"Y{m + 1}: collision window " + ("none" if w is None else f"state bits {w[0]}..{w[1]}"))
    lines.append("windows disjoint: " + ("yes" if ov.disjoint else f"no {[(i + 1, j + 1) for i, j in ov.clashes]}"))
    if len(a) >= 2 and a[0] == 0.0 and cfg.P >= 1.0:
        chk = ws.strong_fading_check(cfg.P, c, a)
        lines.append("strong fading: " + ("PASS" if chk else f"FAIL ({chk.violated})"))
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(cfg: CliConfig) -> int:
    M = cfg.M or 2
    P = 4.0 if cfg.P is None else cfg.P
    c2 = 4.0 if cfg.c2 is None else cfg.c2
    model = cfg.model or "wrdp"
    if model == "wrdp":
        sigma = cov_wrdp(M)
    elif model == "wsfd":
        a = cfg.a if cfg.a and len(cfg.a) > 1 else [1.0, cfg.a[0] if cfg.a else 2.0]
        sigma = cov_wsfd(a)
        M = len(a)
    elif model == "ccdp-es":
        _need(cfg, "rho")
        sigma = cov_ccdp_es(M, cfg.rho)
    else:
        raise UsageError(f"simulate supports --model wrdp, wsfd, ccdp-es; got {model}")
    gamma = 0.25 if cfg.gamma is None else cfg.gamma
    rep = lemma_validation(seed=cfg.seed, n=cfg.n, P=P, c2=c2, M=M, gamma=gamma, sigma_s=sigma)
    d = rep.to_dict()
    d["model"] = model
    dump(d)
    return EXIT_OK if rep.passed else EXIT_CLAIM


COMMANDS = {
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "gap": cmd_gap,
    "oracle": cmd_oracle,
    "lindet": cmd_lindet,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccdp", description="Capacity bounds and gap checks for compound dirty-paper channels.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--model", choices=MODELS)
        s.add_argument("--P", type=float)
        s.add_argument("--c2", type=float, help="squared state gain")
        s.add_argument("--c", type=float, help="state gain (alternative to --c2)")
        s.add_argument("--M", type=int)
        s.add_argument("--a", help="comma-separated fading coefficients; one value v means a = [1, v]")
        s.add_argument("--rho", type=float)
        s.add_argument("--Q", type=float)
        s.add_argument("--gamma", type=float)
        s.add_argument("--alpha", type=float)
        s.add_argument("--k", type=float)
        s.add_argument("--grid", help="grid file")
        s.add_argument("--out", help="output path")
        s.add_argument("--format", choices=("csv", "json"), default=None,
                       help="report format; defaults to the --out extension, else json")
        s.add_argument("--seed", type=int, default=7)
        s.add_argument("--n", type=int, default=100_000)
        s.add_argument("--printed", action="store_true", help="sweep the printed closed forms (never gating)")
    return p


def _format(fmt, out) -> str:
    if fmt:
        return fmt
    ext = os.path.splitext(out or "")[1].lower()
    return "csv" if ext == ".csv" else "json"


def to_config(ns: argparse.Namespace) -> CliConfig:
    if ns.c is not None and ns.c2 is not None:
        raise UsageError("give either --c or --c2, not both")
    c2 = ns.c2 if ns.c is None else ns.c * ns.c
    return CliConfig(
        command=ns.command, model=ns.model, P=ns.P, c2=c2, M=ns.M, a=_parse_a(ns.a), rho=ns.rho, Q=ns.Q,
        gamma=ns.gamma, alpha=ns.alpha, k=ns.k, grid=ns.grid, out=ns.out, format=_format(ns.format, ns.out), seed=ns.seed,
        n=ns.n, printed=ns.printed,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = to_config(ns)
        return COMMANDS[cfg.command](cfg)
    except ConditionViolation as e:
        sys.stderr.write(f"ccdp {ns.command}: precondition failed: {e.condition}\n  {e}\n")
        return EXIT_USAGE
    except (CcdpError, ValueError) as e:
        sys.stderr.write(f"ccdp {ns.command}: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"ccdp {ns.command}: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
