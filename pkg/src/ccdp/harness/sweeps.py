"""Gap sweeps, consistency sweeps and the branch-continuity audit.

Grid points are evaluated independently, optionally on a thread pool whose
size is capped by the ``CCDP_THREADS`` environment variable. Records always
come back in grid order (``P`` outermost, then ``c2``, then the remaining axes).
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import bounds_ccdp_es as es
from .. import bounds_wrdp as wr
from .. import bounds_wsfd as ws
from ..channel_model import ccdp_es_feasible
from ..errors import ConditionViolation, DimensionError, ParameterRangeError
from ..rates import CANONICAL, PRINTED
from .grid import DEFAULT_M, DEFAULT_Q, SweepGrid, as_int_list, default_grid, default_rho
from .report import FLOAT_SLACK, GapRecord, GapReport, flag_printed

CLAIM_WRDP2 = 1.0
CLAIM_WRDPM = 2.25
CLAIM_WSFD2 = 4.0
CLAIM_ES2 = 1.0
CLAIM_ESM = 2.25
CLAIM_UNEQ = 2.0


def max_threads() -> int:
    env = os.environ.get("CCDP_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ParameterRangeError(f"CCDP_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return max(1, min(4, os.cpu_count() or 1))


def parallel_map(fn, items: list) -> list:
    """``[fn(x) for x in items]`` evaluated in contiguous chunks; order is preserved."""
    n = max_threads()
    if n == 1 or len(items) < 64:
        return [fn(x) for x in items]
    size = math.ceil(len(items) / n)
    chunks = [items[i : i + size] for i in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=n) as pool:
        parts = list(pool.map(lambda ch: [fn(x) for x in ch], chunks))
    return [r for part in parts for r in part]


def _pc(grid: SweepGrid) -> list[tuple[float, float]]:
    P = grid["P"]
    c2 = grid["c2"]
    if np.any(P <= 0):
        raise ParameterRangeError("P axis must be > 0")
    if np.any(c2 < 0):
        raise ParameterRangeError("c2 axis must be >= 0")
    return [(float(p), float(c)) for p, c in itertools.product(P, c2)]


def _m_list(grid: SweepGrid, M_list) -> list[int]:
    if M_list is None:
        M_list = grid.get("M", DEFAULT_M)
    Ms = as_int_list(M_list, "M")
    if not Ms or min(Ms) < 2:
        raise DimensionError("M values must be integers >= 2")
    return Ms


def _rec(theorem, P, c2, inner, outer, **kw) -> GapRecord:
    return GapRecord(
        theorem=theorem, P=P, c2=c2, inner=inner.value, outer=outer.value,
        gap=outer.value - inner.value, branch_in=inner.branch, branch_out=outer.branch,
        scheme=kw.pop("scheme", inner.branch), **kw,
    )


# -- independent states ---------------------------------------------------------


def gap_sweep_wrdp2(grid: SweepGrid | None = None) -> GapReport:
    grid = grid or default_grid("wrdp")
    pts = _pc(grid)

    def one(pt):
        P, c2 = pt
        c = math.sqrt(c2)
        return _rec("wrdp-2", P, c2, wr.wrdp_inner_2(P, c), wr.wrdp_outer_2(P, c), M=2)

    return GapReport("wrdp-2", CLAIM_WRDP2, parallel_map(one, pts), grid.describe())


def gap_sweep_wrdpM(grid: SweepGrid | None = None, M_list=None, form: str = CANONICAL) -> GapReport:
    grid = grid or default_grid("wrdp-M")
    Ms = _m_list(grid, M_list)
    pts = [(P, c2, M) for (P, c2) in _pc(grid) for M in Ms]
    name = "wrdp-M" if form == CANONICAL else "wrdp-M-printed"

    def one(pt):
        P, c2, M = pt
        c = math.sqrt(c2)
        return _rec(name, P, c2, wr.wrdp_inner_M(P, c, M), wr.wrdp_outer_M(P, c, M, form), M=M)

    report = GapReport(name, CLAIM_WRDPM, parallel_map(one, pts), grid.describe())
    return flag_printed(report) if form == PRINTED else report


# -- scaled states --------------------------------------------------------------


def gap_sweep_wsfd2(grid: SweepGrid | None = None, outer: str = "raw") -> GapReport:
    """Portfolio inner bound against the raw (default) or point-to-point-capped outer bound."""
    grid = grid or default_grid("wsfd")
    a_vals = grid.get("a")
    if a_vals is None:
        a_vals = default_grid("wsfd")["a"]
    if np.any(np.abs(a_vals) < 1.0):
        raise ParameterRangeError("two-receiver scaled-state sweep needs |a| >= 1")
    outer_fn = {"raw": ws.wsfd_outer_raw_2, "canonical": ws.wsfd_outer_canonical_2}.get(outer)
    if outer_fn is None:
        raise ParameterRangeError(f"outer must be 'raw' or 'canonical', got {outer!r}")
    name = "wsfd-2" if outer == "raw" else "wsfd-2-capped"
    pts = [(P, c2, float(a)) for (P, c2) in _pc(grid) for a in a_vals]

    def one(pt):
        P, c2, a = pt
        c = math.sqrt(c2)
        r = _rec(name, P, c2, ws.wsfd_inner_2(P, c, a), outer_fn(P, c, a), a=a, M=2)
        if (P <= 3.0 or c2 <= 3.0) and r.gap > CLAIM_WSFD2 + FLOAT_SLACK:
            r.flag = "low-power violation"
        return r

    return GapReport(name, CLAIM_WSFD2, parallel_map(one, pts), grid.describe())


@dataclass(frozen=True, eq=False)
class StrongSpec:
    """One strong-fading instance; ``gamma`` selects the generalised condition set."""

    P: float
    c: float
    a: tuple
    gamma: float | None = None


def gap_sweep_strong(specs) -> GapReport:
    """Time-sharing against the strong-fading outer bound; every spec must satisfy its conditions."""
    specs = list(specs)
    if not specs:
        raise DimensionError("no strong-fading specs supplied")
    records = []
    for sp in specs:
        M = len(sp.a)
        if sp.gamma is None:
            chk = ws.strong_fading_check(sp.P, sp.c, sp.a)
            outer = ws.wsfd_outer_strong(sp.P, M)
            claim = 0.5 * math.log2(M) + 2.0
        else:
            chk = ws.strong_fading_check_v2(sp.P, sp.c, sp.a, sp.gamma)
            outer = ws.wsfd_outer_strong_v2(sp.P, M, sp.gamma)
            claim = 0.5 * math.log2(M) + 0.5 * math.log2(sp.gamma) + 2.0
        if not chk:
            raise ConditionViolation(chk.violated, f"spec P={sp.P}, c={sp.c}, a={list(sp.a)} "
                                                   f"violates {chk.violated}")
        inner = ws.wsfd_inner_timeshare(sp.P, M)
        r = _rec("strong" if sp.gamma is None else "strong-v2", sp.P, sp.c * sp.c, inner, outer, M=M,
                 claim=claim)
        records.append(r)
    report = GapReport("strong", max(r.claim for r in records), records)
    report.notes.append("each record is compared with its own claim 0.5 log2(M) + 2 (+ 0.5 log2(gamma))")
    return report


def strong_excess(report: GapReport) -> float:
    """Largest ``gap - claim`` over the records of a strong-fading report."""
    return max(report.excess(r) for r in report.records)


# -- equi-correlated and unequal-variance states ------------------------------------


def gap_sweep_ccdpes(grid: SweepGrid | None = None, M_list=None, form: str = CANONICAL,
                     Q_list=None) -> list[GapReport]:
    """Two-receiver, M-receiver and (canonical only) unequal-variance reports.

    Infeasible ``rho`` values from a user grid are skipped and listed in the notes.
    """
    grid = grid or default_grid("ccdp-es")
    Ms = _m_list(grid, M_list)
    pc = _pc(grid)
    rho_axis = grid.get("rho")
    printed = form == PRINTED
    if form not in (CANONICAL, PRINTED):
        raise ParameterRangeError(f"form must be 'printed' or 'canonical', got {form!r}")

    def rhos(M):
        return default_rho(M) if rho_axis is None else [float(r) for r in rho_axis]

    skipped = []

    def feasible(M, rho):
        ok = ccdp_es_feasible(M, rho)
        if not ok:
            skipped.append(f"rho={rho!r} infeasible for M={M}; skipped")
        return ok

    name2 = "ccdpes-2-printed" if printed else "ccdpes-2"
    pts2 = [(P, c2, float(r)) for (P, c2) in pc for r in rhos(2) if feasible(2, float(r))]

    def one2(pt):
        P, c2, rho = pt
        c = math.sqrt(c2)
        return _rec(name2, P, c2, es.ccdpes_inner_2(P, c, rho), es.ccdpes_outer_2(P, c, rho, form),
                    rho=rho, M=2)

    nameM = "ccdpes-M-printed" if printed else "ccdpes-M"
    ptsM = [(P, c2, M, float(r)) for (P, c2) in pc for M in Ms for r in rhos(M) if feasible(M, float(r))]

    def oneM(pt):
        P, c2, M, rho = pt
        c = math.sqrt(c2)
        return _rec(nameM, P, c2, es.ccdpes_inner_M(P, c, rho, M), es.ccdpes_outer_M(P, c, rho, M, form),
                    rho=rho, M=M)

    r2 = GapReport(name2, CLAIM_ES2, parallel_map(one2, pts2), grid.describe())
    rM = GapReport(nameM, CLAIM_ESM, parallel_map(oneM, ptsM), grid.describe())
    notes = sorted(set(skipped))
    r2.notes.extend(notes)
    rM.notes.extend(notes)
    if printed:
        return [flag_printed(r2), flag_printed(rM)]
    return [r2, rM, gap_sweep_unequal(grid, Q_list)]


def gap_sweep_unequal(grid: SweepGrid | None = None, Q_list=None) -> GapReport:
    """Unequal-variance outer bound against the scheme portfolio; asserted only where ``c^2 sqrt(Q) >= P+1``."""
    grid = grid or default_grid("ccdp-uneq")
    if Q_list is None:
        Q_list = grid.get("Q", DEFAULT_Q)
    pts = [(P, c2, float(Q)) for (P, c2) in _pc(grid) for Q in Q_list]

    def one(pt):
        P, c2, Q = pt
        c = math.sqrt(c2)
        r = _rec("unequal-2", P, c2, es.ccdp_unequal_inner_2(P, c, Q), es.ccdp_unequal_outer_2(P, c, Q), Q=Q, M=2)
        r.asserted = c2 * math.sqrt(Q) >= P + 1.0
        return r

    report = GapReport("unequal-2", CLAIM_UNEQ, parallel_map(one, pts), grid.describe())
    report.notes.append("claim asserted only where c2*sqrt(Q) >= P+1; other gaps are recorded")
    return report


# -- consistency ----------------------------------------------------------------


@dataclass
class ConsistencyReport:
    model: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _pairs(model: str):
    """(label, inner(P, c, extra), outer(P, c, extra), extra values) for each model."""
    if model == "wrdp":
        inners = {"wrdp_inner_2": wr.wrdp_inner_2, "lapidoth_inner_2": wr.lapidoth_inner_2}
        outers = {"wrdp_outer_2": wr.wrdp_outer_2, "lapidoth_outer_2": wr.lapidoth_outer_2,
                  "lapidoth_outer_M": lambda P, c: wr.lapidoth_outer_M(P, c, 2)}
        return [(f"{i}<={o}", fi, fo, None) for i, fi in inners.items() for o, fo in outers.items()]
    if model == "wrdp-M":
        return [
            ("wrdp_inner_M<=wrdp_outer_M", wr.wrdp_inner_M, lambda P, c, M: wr.wrdp_outer_M(P, c, M), "M"),
            ("wrdp_inner_M<=lapidoth_outer_M", wr.wrdp_inner_M, wr.lapidoth_outer_M, "M"),
        ]
    if model == "wsfd":
        return [("wsfd_inner_2<=wsfd_outer_raw_2", ws.wsfd_inner_2, ws.wsfd_outer_raw_2, "a")]
    if model == "ccdp-es":
        return [
            ("ccdpes_inner_2<=ccdpes_outer_2", es.ccdpes_inner_2, es.ccdpes_outer_2, "rho"),
            ("ccdpes_inner_M<=ccdpes_outer_M", lambda P, c, rm: es.ccdpes_inner_M(P, c, rm[1], rm[0]),
             lambda P, c, rm: es.ccdpes_outer_M(P, c, rm[1], rm[0]), "M-rho"),
        ]
    if model == "ccdp-uneq":
        return [("ccdp_unequal_inner_2<=ccdp_unequal_outer_2", es.ccdp_unequal_inner_2,
                 es.ccdp_unequal_outer_2, "Q")]
    raise ParameterRangeError(f"unknown model {model!r}")


def consistency_sweep(grid: SweepGrid | None, model: str, swap: bool = False) -> ConsistencyReport:
    """Check every inner bound against every outer bound of ``model`` at every grid point.

    ``swap=True`` exchanges the roles of the two bounds; it exists so the
    harness can check that it actually detects violations.
    """
    key = {"wrdp": "wrdp", "wrdp-M": "wrdp-M", "wsfd": "wsfd", "ccdp-es": "ccdp-es",
           "ccdp-uneq": "ccdp-uneq"}.get(model)
    if key is None:
        raise ParameterRangeError(f"unknown model {model!r}")
    grid = grid or default_grid(model)
    pc = _pc(grid)
    rep = ConsistencyReport(model)
    for label, fin, fout, extra in _pairs(key):
        if extra is None:
            xs = [()]
        elif extra == "M":
            xs = [(M,) for M in _m_list(grid, None)]
        elif extra == "a":
            xs = [(float(a),) for a in grid.get("a", default_grid("wsfd")["a"])]
        elif extra == "rho":
            xs = [(float(r),) for r in (grid.get("rho") if grid.get("rho") is not None else default_rho(2))
                  if ccdp_es_feasible(2, float(r))]
        elif extra == "Q":
            xs = [(float(q),) for q in grid.get("Q", DEFAULT_Q)]
        else:
            xs = [((M, float(r)),) for M in _m_list(grid, None)
                  for r in (grid.get("rho") if grid.get("rho") is not None else default_rho(M))
                  if ccdp_es_feasible(M, float(r))]

        def one(pt, fin=fin, fout=fout):
            (P, c2), x = pt
            c = math.sqrt(c2)
            lo, hi = fin(P, c, *x).value, fout(P, c, *x).value
            if swap:
                lo, hi = hi, lo
            return None if lo <= hi + FLOAT_SLACK else {"check": label, "P": P, "c2": c2, "extra": x,
                                                        "inner": lo, "outer": hi}

        pts = [(p, x) for p in pc for x in xs]
        rep.checked += len(pts)
        rep.violations.extend(v for v in parallel_map(one, pts) if v is not None)
    return rep


# -- branch continuity ------------------------------------------------------------


@dataclass(frozen=True)
class Jump:
    function: str
    P: float
    M: int | None
    boundary_c2: float
    left: float
    right: float

    @property
    def size(self) -> float:
        return self.right - self.left


def _boundaries(name: str, P: float, M: int):
    return {
        "lapidoth_outer_2": [4.0],
        "lapidoth_inner_2": [2.0, 2.0 * (P + 1.0)],
        "wrdp_outer_2": [1.0, P + 1.0],
        "wrdp_inner_2": [1.0, P + 1.0],
        "wffd_outer_antipodal": [1.0, P + 1.0],
        "wrdp_inner_M": [M - 1.0, (M - 1.0) * (P + 1.0)],
        "wrdp_outer_M_printed": [M - 1.0, (M - 1.0) * (P + 1.0)],
        "wrdp_outer_M": [1.0, (M - 1.0) * (P + 1.0)],
    }[name]


_AUDITED = {
    "lapidoth_outer_2": lambda P, c, M: wr.lapidoth_outer_2(P, c),
    "lapidoth_inner_2": lambda P, c, M: wr.lapidoth_inner_2(P, c),
    "wrdp_outer_2": lambda P, c, M: wr.wrdp_outer_2(P, c),
    "wrdp_inner_2": lambda P, c, M: wr.wrdp_inner_2(P, c),
    "wffd_outer_antipodal": lambda P, c, M: ws.wffd_outer_antipodal(P, c),
    "wrdp_inner_M": lambda P, c, M: wr.wrdp_inner_M(P, c, M),
    "wrdp_outer_M_printed": lambda P, c, M: wr.wrdp_outer_M(P, c, M, PRINTED),
    "wrdp_outer_M": lambda P, c, M: wr.wrdp_outer_M(P, c, M, CANONICAL),
}


def continuity_audit(P_values=(0.5, 3.0, 15.0, 1000.0), M_values=(2, 3, 4, 8), rel: float = 1e-12) -> list[Jump]:
    """Value just below and just above every branch boundary in ``c^2``; reported, never asserted."""
    out = []
    for name, fn in _AUDITED.items():
        Ms = M_values if name.startswith("wrdp_") and "_M" in name else (None,)
        for P in P_values:
            for M in Ms:
                for b in _boundaries(name, P, M or 2):
                    lo = fn(P, math.sqrt(b * (1.0 - rel)), M).value
                    hi = fn(P, math.sqrt(b * (1.0 + rel)), M).value
                    out.append(Jump(name, float(P), M, float(b), lo, hi))
    return out
