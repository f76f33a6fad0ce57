"""Gap records, gap reports and their CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields

from ..errors import CcdpError

CSV_COLUMNS = ("theorem", "P", "c2", "a", "rho", "Q", "M", "inner", "outer", "gap",
               "branch_in", "branch_out", "scheme")
FLOAT_SLACK = 1e-9
PRINTED_DISCREPANCY = "printed-form discrepancy"


class ReportIOError(CcdpError):
    pass


@dataclass
class GapRecord:
    theorem: str
    P: float
    c2: float
    inner: float
    outer: float
    gap: float
    branch_in: str
    branch_out: str
    scheme: str = ""
    a: float | None = None
    rho: float | None = None
    Q: float | None = None
    M: int | None = None
    asserted: bool = True
    flag: str = ""
    claim: float | None = None


@dataclass
class GapReport:
    theorem: str
    threshold: float
    records: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    gating: bool = True
    notes: list = field(default_factory=list)

    @property
    def asserted_records(self) -> list:
        return [r for r in self.records if r.asserted]

    def excess(self, r: GapRecord) -> float:
        """Gap above the claim that applies to ``r`` (its own claim if set, else the report threshold)."""
        return r.gap - (self.threshold if r.claim is None else r.claim)

    @property
    def worst(self) -> GapRecord | None:
        """Asserted record with the largest excess over its claim (first one on ties, in grid order)."""
        best = None
        for r in self.asserted_records:
            if best is None or self.excess(r) > self.excess(best):
                best = r
        return best

    @property
    def max_gap(self) -> float:
        gaps = [r.gap for r in self.asserted_records]
        return max(gaps) if gaps else -math.inf

    @property
    def passed(self) -> bool:
        w = self.worst
        return w is None or self.excess(w) <= FLOAT_SLACK

    @property
    def flagged(self) -> list:
        return [r for r in self.records if r.flag]

    def summary(self) -> dict:
        w = self.worst
        return {
            "theorem": self.theorem,
            "points": len(self.records),
            "asserted": len(self.asserted_records),
            "threshold": self.threshold,
            "max_gap": None if w is None else self.max_gap,
            "max_excess": None if w is None else self.excess(w),
            "argmax": None if w is None else _point(w),
            "gating": self.gating,
            "passed": self.passed,
            "flagged": len(self.flagged),
        }

    def __eq__(self, other):
        if not isinstance(other, GapReport):
            return NotImplemented
        return report_to_dict(self) == report_to_dict(other)


def _point(r: GapRecord) -> dict:
    return {k: getattr(r, k) for k in ("P", "c2", "a", "rho", "Q", "M") if getattr(r, k) is not None}


def flag_printed(report: GapReport) -> GapReport:
    """Mark printed-form records whose gap exceeds the claim; printed reports never gate."""
    report.gating = False
    for r in report.records:
        if r.asserted and report.excess(r) > FLOAT_SLACK:
            r.flag = PRINTED_DISCREPANCY
    return report


# -- serialisation --------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def report_to_csv(report: GapReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.records:
        w.writerow([_fmt(getattr(r, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


_RECORD_FIELDS = tuple(f.name for f in fields(GapRecord))


def report_to_dict(report: GapReport) -> dict:
    return {
        "theorem": report.theorem,
        "threshold": report.threshold,
        "gating": report.gating,
        "grid": report.grid,
        "notes": list(report.notes),
        "summary": report.summary(),
        "records": [{k: getattr(r, k) for k in _RECORD_FIELDS} for r in report.records],
    }


def report_to_json(report: GapReport) -> str:
    return json.dumps(report_to_dict(report), indent=1, allow_nan=False) + "\n"


def report_from_dict(d: dict) -> GapReport:
    names = {f.name for f in fields(GapRecord)}
    records = [GapRecord(**{k: v for k, v in r.items() if k in names}) for r in d["records"]]
    return GapReport(
        theorem=d["theorem"],
        threshold=d["threshold"],
        records=records,
        grid=d.get("grid", {}),
        gating=d.get("gating", True),
        notes=list(d.get("notes", [])),
    )


def load_report(path: str) -> GapReport:
    try:
        with open(path, encoding="utf-8") as fh:
            return report_from_dict(json.load(fh))
    except OSError as e:
        raise ReportIOError(f"cannot read report {path}: {e.strerror}") from None


def emit_report(report: GapReport, fmt: str, path: str | None) -> str:
    """Serialise ``report`` as ``csv`` or ``json``; write to ``path`` unless it is ``None``."""
    if fmt == "csv":
        text = report_to_csv(report)
    elif fmt == "json":
        text = report_to_json(report)
    else:
        raise ReportIOError(f"unknown report format {fmt!r}; use csv or json")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            raise ReportIOError(f"cannot write report {path}: {e.strerror}") from None
    return text
