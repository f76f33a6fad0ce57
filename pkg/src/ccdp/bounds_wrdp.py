"""Inner and outer capacity bounds for independent unit-variance states.

Every function takes the state gain ``c`` (not ``c^2``) and returns a
:class:`~ccdp.rates.RateBound` in bits per channel use. Branch labels name
the regime in ``c^2`` that produced the value.
"""

from __future__ import annotations

import math

from .errors import DimensionError, ParameterRangeError
from .rates import CANONICAL, PRINTED, RateBound, log2, pos, rate


def check_pc(P: float, c: float) -> None:
    if not (P > 0 and math.isfinite(P)):
        raise ParameterRangeError(f"P must be a finite value > 0, got {P}")
    if not (c >= 0 and math.isfinite(c)):
        raise ParameterRangeError(f"c must be a finite value >= 0, got {c}")


def check_m(M, lo: int = 2) -> int:
    if int(M) != M or M < lo:
        raise DimensionError(f"M must be an integer >= {lo}, got {M}")
    return int(M)


def check_alpha(alpha: float, closed_top: bool = True) -> float:
    ok = 0.0 <= alpha <= 1.0 if closed_top else 0.0 <= alpha < 1.0
    if not ok:
        top = "]" if closed_top else ")"
        raise ParameterRangeError(f"alpha must lie in [0, 1{top}, got {alpha}")
    return float(alpha)


# -- two-receiver reference bounds from the carbon-copying literature -------


def lapidoth_outer_2(P: float, c: float) -> RateBound:
    check_pc(P, c)
    c2 = c * c
    cross = 1.0 + P + c2 + 2.0 * c * math.sqrt(P)
    if c2 < 4.0:
        d = c2 / 4.0 + 1.0
        # the second term is printed without a log; restored here
        return rate(0.25 * log2((1.0 + P) / d) + 0.25 * log2(cross / d), "c2<4")
    return rate(0.25 * log2(1.0 + P) + 0.25 * log2(cross) - 0.25 * log2(c2), "c2>=4")


def lapidoth_inner_2(P: float, c: float) -> RateBound:
    check_pc(P, c)
    h = c * c / 2.0
    if h <= 1.0:
        return rate(0.5 * log2(1.0 + P / (h + 1.0)), "c2/2<=1")
    if h < P + 1.0:
        return rate(0.5 * log2((P + h + 1.0) / (c * c)) + 0.25 * log2(h), "1<c2/2<P+1")
    return rate(0.25 * log2(P + 1.0), "c2/2>=P+1")


def lapidoth_outer_M(P: float, c: float, M: int) -> RateBound:
    """M-receiver reference outer bound, capped at the single-receiver capacity."""
    check_pc(P, c)
    M = check_m(M)
    p2p = 0.5 * log2(1.0 + P)
    c2 = c * c
    if c2 == 0.0:  # includes gains whose square underflows
        return rate(p2p, "c=0")
    raw = (
        0.5 * log2(P + c2 + 2.0 * c * math.sqrt(P))
        - (M - 1) / (2.0 * M) * log2(c2)
        - log2(M) / (2.0 * M)
        - pos((log2(c2) - log2(M * (P + 1.0))) / (2.0 * M))
    )
    if raw >= p2p:
        return RateBound(p2p, "p2p-cap", PRINTED, raw)
    branch = "c2>M(P+1)" if c2 > M * (P + 1.0) else "c2<=M(P+1)"
    return rate(raw, branch)


# -- two receivers ------------------------------------------------------------


def wrdp_outer_2(P: float, c: float) -> RateBound:
    check_pc(P, c)
    c2 = c * c
    if c2 <= 1.0:
        return rate(0.5 * log2(P + 1.0), "c2<=1")
    if c2 < P + 1.0:
        return rate(0.5 * log2(P + c2 + 1.0) - 0.25 * log2(c2 + 1.0) + 0.5, "1<c2<P+1")
    return rate(0.25 * log2(P + 1.0) + 1.0, "c2>=P+1")


def wrdp_inner_param_2(P: float, c: float, alpha: float) -> RateBound:
    """Superposition of a state-as-noise layer (power ``alpha P``) over two time-shared precoded layers."""
    check_pc(P, c)
    alpha = check_alpha(alpha)
    ab = 1.0 - alpha
    v = 0.5 * log2(1.0 + alpha * P / (c * c + ab * P + 1.0)) + 0.25 * log2(1.0 + ab * P)
    return rate(v, "param")


def wrdp_inner_2(P: float, c: float) -> RateBound:
    check_pc(P, c)
    c2 = c * c
    if c2 < 1.0:
        return rate(0.5 * log2(1.0 + P / (c2 + 1.0)), "c2<1")
    if c2 < P + 1.0:
        return rate(0.5 * log2(1.0 + c2 + P) - 0.25 * log2(c2) - 0.5, "1<=c2<P+1")
    return rate(0.25 * log2(P + 1.0), "c2>=P+1")


def wrdp_alpha_star_2(P: float, c: float) -> float:
    """Maximizing power share ``alpha`` of the common layer: ``(1 - alpha) P = c^2 - 1`` clipped to [0, 1]."""
    check_pc(P, c)
    return 1.0 - wrdp_alpha_star_M(P, c, 2)


# -- M receivers -------------------------------------------------------------


def wrdp_outer_M(P: float, c: float, M: int, form: str = CANONICAL) -> RateBound:
    check_pc(P, c)
    M = check_m(M)
    c2 = c * c
    knee = (M - 1) * (P + 1.0)
    if form == PRINTED:
        if c2 < M - 1:
            return rate(0.5 * log2(1.0 + P / (1.0 + c2)) + 2.25, "c2<M-1")
        if c2 < knee:
            v = log2(1.0 + P) / (2.0 * M) + (M - 1) / (2.0 * M) * log2(c2) + 1.5
            return rate(v, "M-1<=c2<(M-1)(P+1)")
        return rate(log2(1.0 + P) / (2.0 * M) + 2.0, "c2>=(M-1)(P+1)")
    if form != CANONICAL:
        raise ParameterRangeError(f"form must be 'printed' or 'canonical', got {form!r}")
    p2p = 0.5 * log2(1.0 + P)
    ch2 = min(max(c2, 1.0), knee)
    raw = 0.5 * log2(1.0 + P + ch2) - (M - 1) / (2.0 * M) * log2(ch2) + 1.5
    if raw >= p2p:
        return RateBound(p2p, "p2p-cap", CANONICAL, raw)
    if c2 <= 1.0:
        branch = "c2<=1"
    elif c2 >= knee:
        branch = "c2>=(M-1)(P+1)"
    else:
        branch = "middle"
    return rate(raw, branch, CANONICAL)


def wrdp_alpha_star_M(P: float, c: float, M: int) -> float:
    """Maximizing private power share ``1 - alpha`` for the M-receiver layered scheme."""
    if not P > 0:
        raise ParameterRangeError(f"P must be > 0, got {P}")
    M = check_m(M)
    return max(0.0, min(1.0, (c * c + 1.0 - M) / (P * (M - 1))))


def wrdp_inner_param_M(P: float, c: float, M: int, alpha: float) -> RateBound:
    check_pc(P, c)
    M = check_m(M)
    alpha = check_alpha(alpha)
    ab = 1.0 - alpha
    v = 0.5 * log2(1.0 + alpha * P / (c * c + ab * P + 1.0)) + log2(1.0 + ab * P) / (2.0 * M)
    return rate(v, "param")


def wrdp_inner_M(P: float, c: float, M: int) -> RateBound:
    """Closed-form rate of the layered scheme at the optimal power split.

    The middle branch is floored at the time-sharing rate, which is always
    achievable (``alpha = 0``); without the floor the expression jumps upward
    at ``c^2 = (M-1)(P+1)`` for ``M >= 3``.
    """
    check_pc(P, c)
    M = check_m(M)
    c2 = c * c
    ts = log2(1.0 + P) / (2.0 * M)
    if c2 < M - 1:
        return rate(0.5 * log2(1.0 + P / (1.0 + c2)), "c2<M-1")
    if c2 <= (M - 1) * (P + 1.0):
        v = 0.5 * log2(P + c2 + 1.0) - (M - 1) / (2.0 * M) * log2(c2) - 0.5
        if v < ts:
            return RateBound(ts, "middle-timeshare-floor", PRINTED, v)
        return rate(v, "middle")
    return rate(ts, "c2>(M-1)(P+1)")
