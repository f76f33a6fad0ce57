"""Bounds for states that are scaled copies of a single sequence.

Two-receiver functions use the normalised model ``Y_1 = X + c S + Z_1``,
``Y_2 = X + c a S + Z_2``. The M-receiver strong-fading results take a
sorted :class:`FadingVector`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds_wrdp import check_alpha, check_m, check_pc
from .errors import DimensionError, ParameterRangeError, RegimeError
from .rates import CANONICAL, RateBound, log2, rate

# alpha grid for the partially optimised common-rate scheme: log-spaced towards both ends
_EDGE = np.geomspace(1e-12, 0.5, 256)
RCR_ALPHA_GRID = np.unique(np.concatenate([[0.0], _EDGE, 1.0 - _EDGE]))
RCR_ALPHA_GRID = RCR_ALPHA_GRID[RCR_ALPHA_GRID < 1.0]


@dataclass(frozen=True, eq=False)
class FadingVector:
    """Scaling coefficients ``a_1 <= ... <= a_M``; ``delta`` holds ``a_m - a_1``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        if a.ndim != 1 or a.size == 0:
            raise DimensionError("fading vector must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(a)):
            raise ParameterRangeError("fading coefficients must be finite")
        if np.any(np.diff(a) < 0):
            raise ParameterRangeError(f"fading coefficients must be sorted ascending, got {a.tolist()}")
        object.__setattr__(self, "a", a)

    @property
    def M(self) -> int:
        return int(self.a.size)

    @property
    def delta(self) -> np.ndarray:
        return self.a - self.a[0]


def as_fading(a) -> FadingVector:
    return a if isinstance(a, FadingVector) else FadingVector(a)


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of a regime check; falsy when a condition fails."""

    passed: bool
    violated: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


# -- two-receiver outer bounds ----------------------------------------------


def wsfd_outer_raw_2(P: float, c: float, a: float) -> RateBound:
    """Outer bound from the entropy-difference argument, with the gain tightened to ``(1+P)/a^2`` when smaller."""
    check_pc(P, c)
    c2 = c * c
    if abs(a) >= 1.0:
        c2 = min(c2, (1.0 + P) / (a * a))
    v = (
        0.25 * log2(P + c2 + 1.0)
        + 0.25 * log2(P + c2 * a * a + 1.0)
        - 0.25 * log2(c2 * (a - 1.0) ** 2 + 1.0)
        + 0.5
    )
    branch = "tightened" if c2 < c * c else "raw"
    return rate(v, branch, CANONICAL)


def wsfd_outer_canonical_2(P: float, c: float, a: float) -> RateBound:
    """``min`` of the raw outer bound and the single-receiver capacity ``0.5 log(1+P)``."""
    raw = wsfd_outer_raw_2(P, c, a)
    p2p = 0.5 * log2(1.0 + P)
    if p2p <= raw.value:
        return RateBound(p2p, "p2p-cap", CANONICAL, raw.value)
    return raw


def weak_threshold(P: float, c: float) -> float:
    """``1 + 1/min(sqrt(P), c)``: upper end of the weak-fading interval (infinite when c = 0)."""
    m = min(math.sqrt(P), c)
    return math.inf if m == 0.0 else 1.0 + 1.0 / m


def wsfd_outer_2(P: float, c: float, a: float) -> RateBound:
    """Four-branch closed form, regimes tested in order weak, medium, strong."""
    check_pc(P, c)
    if abs(a) < 1.0:
        raise RegimeError(f"two-receiver closed form needs |a| >= 1, got a={a}")
    c2 = c * c
    thr = weak_threshold(P, c)
    if 1.0 <= a < thr:
        return rate(0.5 * log2(P + 1.0), "weak")
    if thr <= a <= 2.0:
        v = 0.25 * log2(P + 1.0) + 0.25 * log2(min(P, c2) * (a - 1.0) ** 2 + 1.0)
        return rate(v, "medium")
    if c2 * a * a <= P + 1.0:
        # exponent read as applying to the argument: 0.5 log((P + 2 c^2 (a-1)^2)^2)
        v = log2(P + 2.0 * c2 * (a - 1.0) ** 2) - 0.25 * log2(c2 * (a - 1.0) ** 2 + 1.0)
        return rate(v, "strong-c2a2<=P+1")
    return rate(0.25 * log2(P + 1.0) + 0.5, "strong-c2a2>P+1")


def wffd_outer_antipodal(P: float, c: float) -> RateBound:
    """Outer bound for the fast-fading channel with fading uniform on {-1, +1}."""
    check_pc(P, c)
    c2 = c * c
    if c2 <= 1.0:
        return rate(0.5 * log2(P + 1.0), "c2<=1")
    if c2 < P + 1.0:
        return rate(0.5 * log2(P + c2 + 1.0) - 0.25 * log2(c2 + 1.0) + 1.5, "1<c2<P+1")
    return rate(0.25 * log2(P + 1.0) + 2.0, "c2>=P+1")


# -- two-receiver inner bounds ----------------------------------------------


def _mismatch(P: float, c2: float, a: float) -> float:
    """Residual-state penalty ``P c^2 (1-a)^2 / (P + c^2 + 1)`` seen by the receiver the code was not precoded for."""
    return P * c2 * (1.0 - a) ** 2 / (P + c2 + 1.0)


def wsfd_inner_rcr_2(P: float, c: float, a: float, alpha: float) -> RateBound:
    check_pc(P, c)
    alpha = check_alpha(alpha, closed_top=False)
    ab = 1.0 - alpha
    c2 = c * c
    inner = (alpha * P + 1.0) / (alpha * _mismatch(P, c2, a) + 1.0 + ab * P)
    v = 0.5 * log2(inner + 1.0) + 0.25 * log2(ab * P) - 1.0
    return rate(v, "rcr")


def rcr_grid(P: float, c: float, a: float, alphas=RCR_ALPHA_GRID) -> tuple[float, float]:
    """Best ``(raw value, alpha)`` of the common-rate expression over an alpha grid (vectorised)."""
    check_pc(P, c)
    al = np.asarray(alphas, dtype=float)
    if al.size == 0:
        raise DimensionError("alpha grid is empty")
    if np.any((al < 0) | (al >= 1)):
        raise ParameterRangeError("alpha grid must lie in [0, 1)")
    ab = 1.0 - al
    c2 = c * c
    inner = (al * P + 1.0) / (al * _mismatch(P, c2, a) + 1.0 + ab * P)
    v = 0.5 * np.log2(inner + 1.0) + 0.25 * np.log2(ab * P) - 1.0
    i = int(np.argmax(v))
    return float(v[i]), float(al[i])


def wsfd_inner_wdp_2(P: float, c: float, a: float) -> RateBound:
    """Precode for receiver 1 as in a single-receiver channel; receiver 2 pays the mismatch."""
    check_pc(P, c)
    v = 0.5 * log2(P + 1.0) - 0.5 * log2(_mismatch(P, c * c, a) + 1.0)
    return rate(v, "wdp")


def wsfd_inner_medium_2(P: float, a: float) -> RateBound:
    """Common-rate scheme with ``alpha = a - 1`` in the medium-fading interval."""
    if not (1.0 < a <= 2.0):
        raise RegimeError(f"medium-fading rate needs 1 < a <= 2, got a={a}")
    if not P > 3.0:
        raise RegimeError(f"medium-fading rate needs P > 3, got P={P}")
    ap = a - 1.0
    den = (P * (-(ap**3) + ap**2 + ap) + 1.0) ** 2
    v = 0.25 * log2(P) + 0.25 * log2(P * (ap * P + 1.0) / den)
    return rate(v, "medium")


def wsfd_inner_treat_as_noise(P: float, c: float, a: float) -> RateBound:
    """State treated as noise; the receiver with the larger state variance limits the common rate."""
    check_pc(P, c)
    return rate(0.5 * log2(1.0 + P / (c * c * max(1.0, a * a) + 1.0)), "treat-as-noise")


def wsfd_inner_timeshare(P: float, M: int) -> RateBound:
    """Precode for each receiver in turn for a fraction ``1/M`` of the time."""
    if not P > 0:
        raise ParameterRangeError(f"P must be > 0, got {P}")
    M = check_m(M, lo=1)
    return rate(log2(1.0 + P) / (2.0 * M), "timeshare")


def wsfd_inner_2(P: float, c: float, a: float) -> RateBound:
    """Best member of the two-receiver scheme portfolio; ``branch`` names the winner."""
    check_pc(P, c)
    cands = {
        "treat-as-noise": wsfd_inner_treat_as_noise(P, c, a).value,
        "wdp-rx1": wsfd_inner_wdp_2(P, c, a).value,
        "timeshare": wsfd_inner_timeshare(P, 2).value,
    }
    if a != 0.0:
        # precoding for receiver 2 is the same scheme with the roles swapped
        cands["wdp-rx2"] = wsfd_inner_wdp_2(P, c * abs(a), 1.0 / a).value
    best_rcr, _ = rcr_grid(P, c, a)
    cands["rcr"] = max(best_rcr, 0.0)
    if weak_threshold(P, c) <= a <= 2.0 and P > 3.0 and c * c > 3.0:
        cands["medium"] = wsfd_inner_medium_2(P, a).value
    name = max(cands, key=lambda k: cands[k])
    return rate(cands[name], name)


# -- M receivers, strong fading -----------------------------------------------


def strong_fading_check(P: float, c: float, a) -> ConditionResult:
    """Strong-fading conditions for ``a_1 = 0``; reports the first violated condition."""
    fv = as_fading(a)
    if fv.M < 2:
        raise DimensionError("strong-fading check needs M >= 2")
    if not P >= 1.0:
        raise ParameterRangeError(f"strong-fading check needs P >= 1, got {P}")
    if fv.a[0] != 0.0:
        raise RegimeError("a_1 != 0: use strong_fading_check_v2")
    a = fv.a
    if not c * c * a[1] ** 2 > P + 1.0:
        return ConditionResult(False, "c^2 a_2^2 > P+1", f"c^2 a_2^2 = {c * c * a[1] ** 2:.6g}")
    for m in range(2, fv.M):
        if not a[m] ** 2 >= (P + 1.0) * a[m - 1] ** 2:
            return ConditionResult(
                False,
                f"a_{m + 1}^2 / a_{m}^2 >= P+1",
                f"ratio = {a[m] ** 2 / a[m - 1] ** 2:.6g}",
            )
    return ConditionResult(True)


def strong_fading_check_v2(P: float, c: float, a, gamma: float) -> ConditionResult:
    """Generalised strong-fading conditions on ``delta_m = a_m - a_1`` with slack ``gamma``.

    The partial-sum condition ``sum_{i=2}^{m-1} delta_i^2 >= gamma a_m^2`` is
    checked for ``m >= 3``; at ``m = 2`` its sum is empty.
    """
    fv = as_fading(a)
    if fv.M < 2:
        raise DimensionError("strong-fading check needs M >= 2")
    if not gamma > 0:
        raise ParameterRangeError(f"gamma must be > 0, got {gamma}")
    if not P > 0:
        raise ParameterRangeError(f"P must be > 0, got {P}")
    a, d = fv.a, fv.delta
    c2 = c * c
    if not c2 * d[1] ** 2 > max(P + 1.0, a[1] ** 2):
        return ConditionResult(False, "c^2 delta_2^2 > max(P+1, a_2^2)")
    for i in range(2, fv.M):
        if not c2 * d[i] ** 2 > 1.0:
            return ConditionResult(False, f"c^2 delta_{i + 1}^2 > 1")
    for m in range(2, fv.M):
        partial = float(np.sum(d[1:m] ** 2))
        if not partial >= gamma * a[m] ** 2:
            return ConditionResult(False, f"sum delta_i^2 (i<{m + 1}) >= gamma a_{m + 1}^2")
        if not d[m] ** 2 >= gamma * P * partial:
            return ConditionResult(False, f"delta_{m + 1}^2 >= gamma P sum delta_i^2 (i<{m + 1})")
    return ConditionResult(True)


def wsfd_outer_strong(P: float, M: int) -> RateBound:
    M = check_m(M)
    if P < 0:
        raise ParameterRangeError(f"P must be >= 0, got {P}")
    return rate(log2(1.0 + P) / (2.0 * M) + 0.5 * log2(M) + 2.0, "strong")


def wsfd_outer_strong_v2(P: float, M: int, gamma: float) -> RateBound:
    if not gamma > 0:
        raise ParameterRangeError(f"gamma must be > 0, got {gamma}")
    M = check_m(M)
    if P < 0:
        raise ParameterRangeError(f"P must be >= 0, got {P}")
    return rate(log2(1.0 + P) / (2.0 * M) + 0.5 * log2(M) + 0.5 * log2(gamma) + 2.0, "strong-v2")

