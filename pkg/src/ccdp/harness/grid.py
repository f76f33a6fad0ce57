"""Sweep grids and the plain-text grid file format.

A grid file has one axis per line::

    # comment
    P  = log 0.5 1048576 43
    c2 = linear 0 10 11
    a  = 1, 1.5, -2
    M  = 2 3 4

``log`` and ``linear`` take ``min max points``; anything else is an
explicit list separated by commas or whitespace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CcdpError, DimensionError, ParameterRangeError

AXES = ("P", "c2", "a", "rho", "Q", "M")


class GridSyntaxError(CcdpError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True, eq=False)
class Axis:
    """One named parameter range, stored as its explicit values."""

    name: str
    values: np.ndarray
    scale: str = "list"

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        if v.size == 0:
            raise DimensionError(f"axis {self.name!r} is empty")
        if not np.all(np.isfinite(v)):
            raise ParameterRangeError(f"axis {self.name!r} has non-finite values")
        if self.scale == "log" and np.any(v <= 0):
            raise ParameterRangeError(f"log axis {self.name!r} must be strictly positive")
        object.__setattr__(self, "values", v)

    @classmethod
    def log(cls, name: str, lo: float, hi: float, points: int) -> "Axis":
        if lo <= 0 or hi <= 0:
            raise ParameterRangeError(f"log axis {name!r} needs positive bounds")
        return cls(name, _space(np.geomspace, lo, hi, points), "log")

    @classmethod
    def linear(cls, name: str, lo: float, hi: float, points: int) -> "Axis":
        return cls(name, _space(np.linspace, lo, hi, points), "linear")

    def describe(self) -> dict:
        return {"scale": self.scale, "points": int(self.values.size),
                "min": float(self.values.min()), "max": float(self.values.max())}


def _space(fn, lo, hi, points) -> np.ndarray:
    points = int(points)
    if points < 1:
        raise DimensionError("axis needs at least one point")
    v = fn(lo, hi, points)
    # pin the endpoints so that e.g. log 0.5 .. 2^20 hits powers of two exactly
    v[0] = lo
    v[-1] = hi
    return v


@dataclass(eq=False)
class SweepGrid:
    axes: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in self.axes:
            if name not in AXES:
                raise ParameterRangeError(f"unknown axis {name!r}; expected one of {AXES}")

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.axes[name].values
        except KeyError:
            raise DimensionError(f"grid has no {name!r} axis") from None

    def get(self, name: str, default=None):
        ax = self.axes.get(name)
        return default if ax is None else ax.values

    def with_axis(self, axis: Axis) -> "SweepGrid":
        axes = dict(self.axes)
        axes[axis.name] = axis
        return SweepGrid(axes)

    def describe(self) -> dict:
        return {name: self.axes[name].describe() for name in AXES if name in self.axes}


# -- defaults -------------------------------------------------------------------


def default_P() -> Axis:
    """``2^(k/2)`` for ``k = -2 .. 40``: 43 points from 0.5 to 2^20."""
    return Axis("P", 2.0 ** (np.arange(-2, 41) / 2.0), "log")


def default_c2() -> Axis:
    """``2^(k/2)`` for ``k = -8 .. 48``: 57 points from 2^-4 to 2^24."""
    return Axis("c2", 2.0 ** (np.arange(-8, 49) / 2.0), "log")


DEFAULT_A = (1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0)
DEFAULT_M = (2, 3, 4, 8, 16)
DEFAULT_Q = (1.0, 2.0, 4.0, 16.0, 256.0)


def default_a() -> Axis:
    return Axis("a", np.array(DEFAULT_A + tuple(-x for x in DEFAULT_A)))


def default_rho(M: int, points: int = 17) -> np.ndarray:
    """Feasible correlations: ``points`` values from ``-1/(M-1)`` to 1, plus 0 if missing."""
    v = np.linspace(-1.0 / (M - 1), 1.0, points)
    v[0] = -1.0 / (M - 1)
    v[-1] = 1.0
    if not np.any(v == 0.0):
        v = np.sort(np.append(v, 0.0))
    return v


def default_grid(model: str = "wrdp") -> SweepGrid:
    axes = {"P": default_P(), "c2": default_c2()}
    if model == "wsfd":
        axes["a"] = default_a()
    if model in ("wrdp-M", "ccdp-es", "strong"):
        axes["M"] = Axis("M", np.array(DEFAULT_M, dtype=float))
    if model in ("ccdp-es", "ccdp-uneq"):
        axes["Q"] = Axis("Q", np.array(DEFAULT_Q))
    return SweepGrid(axes)


# -- grid files -----------------------------------------------------------------


def parse_grid(text: str) -> SweepGrid:
    axes = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise GridSyntaxError(lineno, f"expected 'name = spec', got {raw.strip()!r}")
        name, spec = (s.strip() for s in line.split("=", 1))
        if name not in AXES:
            raise GridSyntaxError(lineno, f"unknown axis {name!r}; expected one of {', '.join(AXES)}")
        if name in axes:
            raise GridSyntaxError(lineno, f"axis {name!r} defined twice")
        toks = spec.replace(",", " ").split()
        if not toks:
            raise GridSyntaxError(lineno, f"axis {name!r} has no values")
        try:
            if toks[0] in ("log", "linear"):
                if len(toks) != 4:
                    raise GridSyntaxError(lineno, f"'{toks[0]}' needs 'min max points', got {' '.join(toks[1:])!r}")
                lo, hi = float(toks[1]), float(toks[2])
                pts = float(toks[3])
                if pts != int(pts):
                    raise GridSyntaxError(lineno, f"point count must be an integer, got {toks[3]!r}")
                make = Axis.log if toks[0] == "log" else Axis.linear
                axes[name] = make(name, lo, hi, int(pts))
            elif toks[0][0].isalpha() and toks[0].lower() not in ("inf", "nan"):
                raise GridSyntaxError(lineno, f"unknown scale {toks[0]!r}; use 'log', 'linear' or a list")
            else:
                axes[name] = Axis(name, np.array([float(t) for t in toks]))
        except GridSyntaxError:
            raise
        except ValueError as e:
            raise GridSyntaxError(lineno, str(e)) from None
    if not axes:
        raise GridSyntaxError(0, "grid file defines no axes")
    return SweepGrid(axes)


def load_grid(path: str) -> SweepGrid:
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


def is_integer_axis(values) -> bool:
    return all(float(v).is_integer() for v in values)


def as_int_list(values, name: str) -> list[int]:
    if not is_integer_axis(values):
        raise ParameterRangeError(f"axis {name!r} must hold integers")
    return [int(v) for v in values]

