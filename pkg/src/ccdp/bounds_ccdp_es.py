"""Bounds and state decompositions for equi-correlated states.

With positive correlation the states share a common component that the
encoder can precode against and a genie can reveal to every receiver; what
remains is an independent-state channel with gain ``c sqrt(1 - max(0, rho))``.
Canonical bounds evaluate the independent-state bounds at that effective gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds_wrdp import check_m, check_pc, wrdp_inner_2, wrdp_inner_M, wrdp_outer_2, wrdp_outer_M
from .channel_model import ccdp_es_feasible
from .errors import FeasibilityError, ParameterRangeError, RegimeError
from .rates import CANONICAL, PRINTED, RateBound, log2, rate

SUBSTITUTED = "substituted"


@dataclass(frozen=True)
class EsSpec:
    M: int
    P: float
    c: float
    rho: float

    def __post_init__(self):
        check_m(self.M)
        check_pc(self.P, self.c)
        check_rho(self.M, self.rho)

    @property
    def rho_bar_plus(self) -> float:
        return rho_bar_plus(self.rho)

    @property
    def c_eff(self) -> float:
        return effective_gain(self.c, self.rho)


def check_rho(M: int, rho: float) -> None:
    if not ccdp_es_feasible(M, rho):
        raise FeasibilityError(f"rho={rho} infeasible for M={M}; valid range is [{-1.0 / (M - 1):.6g}, 1]")


def rho_bar_plus(rho: float) -> float:
    return 1.0 - max(0.0, rho)


def effective_gain(c: float, rho: float) -> float:
    """Gain on the residual independent part once the common component is removed."""
    return c * math.sqrt(rho_bar_plus(rho))


def _tag(b: RateBound, source: str, prefix: str = "") -> RateBound:
    return RateBound(b.value, prefix + b.branch, source, b.raw)


# -- two receivers ------------------------------------------------------------


def ccdpes_outer_2(P: float, c: float, rho: float, form: str = CANONICAL) -> RateBound:
    check_pc(P, c)
    check_rho(2, rho)
    rb = rho_bar_plus(rho)
    if form == CANONICAL:
        return _tag(wrdp_outer_2(P, effective_gain(c, rho)), CANONICAL)
    if form == SUBSTITUTED:
        # closed form with the effective gain substituted into every term; reference only
        t = c * c * rb
        if t <= 1.0:
            return rate(0.5 * log2(P + 1.0), "substituted:t<=1")
        if t < P + 1.0:
            return rate(0.5 * log2(P + t + 1.0) - 0.25 * log2(t) + 0.5, "substituted:1<t<P+1")
        return rate(0.25 * log2(P + 1.0) + 0.5, "substituted:t>=P+1")
    if form != PRINTED:
        raise ParameterRangeError(f"form must be 'printed', 'canonical' or 'substituted', got {form!r}")
    c2 = c * c
    t = c2 * rb
    if t <= 1.0:
        return rate(0.5 * log2(P + 1.0), "c2rb<=1")
    if t < P + 1.0:
        return rate(0.5 * log2(P + c2 + 1.0) - 0.25 * log2(c2) + 0.5, "1<c2rb<P+1")
    return rate(0.25 * log2(P + 1.0) + 0.5, "c2rb>=P+1")


def ccdpes_inner_2(P: float, c: float, rho: float) -> RateBound:
    """Layered scheme whose common layer also precodes against the shared state component."""
    check_pc(P, c)
    check_rho(2, rho)
    return _tag(wrdp_inner_2(P, effective_gain(c, rho)), PRINTED)


# -- M receivers --------------------------------------------------------------


def ccdpes_outer_M(P: float, c: float, rho: float, M: int, form: str = CANONICAL) -> RateBound:
    check_pc(P, c)
    M = check_m(M)
    check_rho(M, rho)
    if form == CANONICAL:
        return wrdp_outer_M(P, effective_gain(c, rho), M, CANONICAL)
    if form != PRINTED:
        raise ParameterRangeError(f"form must be 'printed' or 'canonical', got {form!r}")
    c2 = c * c
    t = c2 * rho_bar_plus(rho)
    knee = (M - 1) * (P + 1.0)
    if t <= M - 1:
        return rate(0.5 * log2(1.0 + P / (1.0 + c2)) + 2.25, "c2rb<=M-1")
    if t <= knee:
        v = log2(1.0 + P) / (2.0 * M) + (M - 1) / (2.0 * M) * log2(c2) + 1.5
        return rate(v, "M-1<c2rb<=(M-1)(P+1)")
    return rate(log2(1.0 + P) / (2.0 * M) + 2.0, "c2rb>(M-1)(P+1)")


def ccdpes_inner_M(P: float, c: float, rho: float, M: int) -> RateBound:
    check_pc(P, c)
    M = check_m(M)
    check_rho(M, rho)
    return wrdp_inner_M(P, effective_gain(c, rho), M)


# -- unequal variances ----------------------------------------------------------


def ccdp_unequal_outer_2(P: float, c: float, Q: float) -> RateBound:
    """Two independent states with variances 1 and ``Q >= 1``."""
    check_pc(P, c)
    if not Q >= 1.0:
        raise ParameterRangeError(f"Q must be >= 1, got {Q}")
    c2 = c * c
    t = c2 * math.sqrt(Q)
    if t <= 1.0:
        return rate(0.5 * log2(P + 1.0), "c2sqrtQ<=1")
    if t < P + 1.0:
        v = (
            0.25 * log2(1.0 + P + c2)
            + 0.25 * log2(1.0 + P + c2 * Q)
            - 0.25 * log2(c2 * (1.0 + Q) + 1.0)
            + 1.5
        )
        return rate(v, "1<c2sqrtQ<P+1")
    return rate(0.25 * log2(P + 1.0) + 2.0, "c2sqrtQ>=P+1")


def ccdp_unequal_inner_2(P: float, c: float, Q: float) -> RateBound:
    """Best of treating the state as noise at the worse receiver and two-way time sharing."""
    check_pc(P, c)
    if not Q >= 1.0:
        raise ParameterRangeError(f"Q must be >= 1, got {Q}")
    tan = 0.5 * log2(1.0 + P / (c * c * Q + 1.0))
    ts = 0.25 * log2(1.0 + P)
    return rate(tan, "treat-as-noise") if tan > ts else rate(ts, "timeshare")


# -- decompositions -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CommonDecomposition:
    """``S_1 = k1c S_c + k1p T_1``, ``S_2 = k2c S_c + k2p T_2`` with ``S_c, T_1, T_2`` i.i.d. N(0, 1)."""

    k1c: float
    k1p: float
    k2c: float
    k2p: float

    @property
    def covariance(self) -> np.ndarray:
        v1 = self.k1c**2 + self.k1p**2
        v2 = self.k2c**2 + self.k2p**2
        x = self.k1c * self.k2c
        return np.array([[v1, x], [x, v2]])


def decompose_common(rho: float, Q: float = 1.0, kappa: float | None = None) -> CommonDecomposition:
    """Split two correlated states (variances 1 and Q, correlation rho) into a common and two private parts.

    ``kappa`` is the common-component weight at receiver 1; any value in
    ``[rho, 1]`` works. The private weight is ``sqrt(1 - kappa^2)`` so that
    receiver 1 keeps unit variance.
    """
    if not Q >= 1.0:
        raise ParameterRangeError(f"Q must be >= 1, got {Q}")
    if not 0.0 <= rho <= 1.0:
        raise RegimeError(f"common decomposition needs 0 <= rho <= 1, got {rho}")
    if kappa is None:
        kappa = max(math.sqrt(rho), rho)
    if not rho <= kappa <= 1.0:
        raise ParameterRangeError(f"kappa must lie in [rho, 1] = [{rho}, 1], got {kappa}")
    ratio = 0.0 if rho == 0.0 else rho / kappa
    sq = math.sqrt(Q)
    return CommonDecomposition(
        k1c=kappa,
        k1p=math.sqrt(max(0.0, 1.0 - kappa * kappa)),
        k2c=sq * ratio,
        k2p=sq * math.sqrt(max(0.0, 1.0 - ratio * ratio)),
    )


@dataclass(frozen=True, eq=False)
class NegativeDecomposition:
    """``S = coeffs @ T`` with ``T`` i.i.d. N(0, 1) indexed by ``pairs`` (``(i, j)``, ``i <= j``, 0-based)."""

    coeffs: np.ndarray
    pairs: tuple

    @property
    def covariance(self) -> np.ndarray:
        return self.coeffs @ self.coeffs.T


def decompose_negative(M: int, rho: float) -> NegativeDecomposition:
    """Write negatively equi-correlated states as sums of pairwise shared terms of opposite sign.

    Each pair ``i < j`` shares one term, entering ``S_i`` with ``+sqrt|rho|``
    and ``S_j`` with ``-sqrt|rho|``; each state adds a private term that
    tops its variance up to 1.
    """
    M = check_m(M)
    if not rho < 0.0:
        raise RegimeError(f"negative decomposition needs rho < 0, got {rho}")
    check_rho(M, rho)
    r = math.sqrt(-rho)
    pairs = [(i, j) for i in range(M) for j in range(i + 1, M)] + [(m, m) for m in range(M)]
    col = {p: n for n, p in enumerate(pairs)}
    A = np.zeros((M, len(pairs)))
    private = math.sqrt(max(0.0, 1.0 - (M - 1) * (-rho)))
    for m in range(M):
        for j in range(m):
            A[m, col[(j, m)]] = -r
        for j in range(m + 1, M):
            A[m, col[(m, j)]] = r
        A[m, col[(m, m)]] = private
    return NegativeDecomposition(A, tuple(pairs))
