"""Binary linear-deterministic approximation of the scaled-state channel.

Noise becomes an erasure of everything below the noise floor and real
addition becomes XOR. Input and state are ``k``-bit vectors (most
significant bit first); receiver ``m`` sees the top ``n_p`` input bits
XOR the top ``n_a[m]`` state bits, both shifted down to the noise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterRangeError

_CEIL_SLACK = 1e-12


def _bits(x: float) -> int:
    """``ceil(log2 x)`` for ``x > 1``, else 0. Exact powers of two are not rounded up."""
    if x <= 1.0:
        return 0
    return max(0, math.ceil(math.log2(x) - _CEIL_SLACK))


@dataclass(frozen=True, eq=False)
class LinDetSpec:
    n_p: int
    n_a: tuple
    k: int

    def __post_init__(self):
        n_a = tuple(int(v) for v in self.n_a)
        if self.n_p < 0 or any(v < 0 for v in n_a):
            raise ParameterRangeError("bit counts must be >= 0")
        if self.k != max((self.n_p,) + n_a):
            raise ParameterRangeError("k must equal the largest bit count")
        object.__setattr__(self, "n_a", n_a)

    @property
    def M(self) -> int:
        return len(self.n_a)

    def __eq__(self, other):
        return isinstance(other, LinDetSpec) and (self.n_p, self.n_a, self.k) == (other.n_p, other.n_a, other.k)

    def __hash__(self):
        return hash((self.n_p, self.n_a, self.k))


def lindet_params(P: float, c: float, a) -> LinDetSpec:
    """Bit counts from the signal levels; the sign of ``c a_m`` is lost."""
    if not P > 0:
        raise ParameterRangeError(f"P must be > 0, got {P}")
    a = np.atleast_1d(np.asarray(getattr(a, "a", a), dtype=float))
    if a.size == 0:
        raise DimensionError("fading vector must be non-empty")
    n_p = _bits(P)
    n_a = tuple(_bits(abs(c * am)) for am in a)
    return LinDetSpec(n_p, n_a, max((n_p,) + n_a))


def shift_down(v: np.ndarray, s: int) -> np.ndarray:
    """Multiply by the ``s``-th power of the down-shift matrix: move bits ``s`` places towards the bottom."""
    v = np.asarray(v, dtype=np.uint8)
    out = np.zeros_like(v)
    if s < v.size:
        out[s:] = v[: v.size - s]
    return out


def shift_matrix(k: int) -> np.ndarray:
    """``k x k`` down-shift matrix with ones just below the diagonal."""
    return np.eye(k, k=-1, dtype=np.uint8)


def lindet_output(x, s, spec: LinDetSpec, m: int) -> np.ndarray:
    """Output bits at receiver ``m`` (0-based)."""
    x = np.asarray(x, dtype=np.uint8)
    s = np.asarray(s, dtype=np.uint8)
    if x.shape != (spec.k,) or s.shape != (spec.k,):
        raise DimensionError(f"bit vectors must have length k={spec.k}, got {x.shape} and {s.shape}")
    if np.any(x > 1) or np.any(s > 1):
        raise ParameterRangeError("bit vectors must contain only 0 and 1")
    if not 0 <= m < spec.M:
        raise DimensionError(f"receiver index {m} out of range for M={spec.M}")
    return shift_down(x, spec.k - spec.n_p) ^ shift_down(s, spec.k - spec.n_a[m])


@dataclass(frozen=True)
class OverlapReport:
    """Per-receiver windows of state bits (1 = most significant) that land on input bits."""

    windows: tuple
    disjoint: bool
    clashes: tuple


def collision_window(spec: LinDetSpec, m: int) -> tuple[int, int] | None:
    """State-bit positions of receiver ``m`` that land on input-bit levels, or ``None``.

    State bit ``j`` (``j <= n_a``) reaches output level ``n_a - j`` above the
    floor; input bits occupy the ``n_p`` lowest levels, so the window is
    ``max(1, n_a - n_p + 1) .. n_a``.
    """
    na = spec.n_a[m]
    if na == 0 or spec.n_p == 0:
        return None
    return (max(1, na - spec.n_p + 1), na)


def lindet_overlap(spec: LinDetSpec) -> OverlapReport:
    wins = tuple(collision_window(spec, m) for m in range(spec.M))
    clashes = []
    for i in range(spec.M):
        for j in range(i + 1, spec.M):
            wi, wj = wins[i], wins[j]
            if wi is None or wj is None:
                continue
            if max(wi[0], wj[0]) <= min(wi[1], wj[1]):
                clashes.append((i, j))
    return OverlapReport(wins, not clashes, tuple(clashes))


def lindet_diagram(spec: LinDetSpec) -> str:
    """Column diagram, one column per receiver, top row = most significant output level.

    Markers: ``X`` input bit only, ``S`` state bit only, ``*`` input and state collide, ``.`` empty.
    """
    k = spec.k
    lines = ["level " + " ".join(f"Y{m + 1:<2d}" for m in range(spec.M))]
    for row in range(k):
        level = k - row  # output level counted from the floor
        cells = []
        for m in range(spec.M):
            has_x = level <= spec.n_p
            has_s = level <= spec.n_a[m]
            cells.append("*" if has_x and has_s else "X" if has_x else "S" if has_s else ".")
        lines.append(f"{level:>5d} " + " ".join(f"{ch:<3s}" for ch in cells))
    return "\n".join(line.rstrip() for line in lines) + "\n"
