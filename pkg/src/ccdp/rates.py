"""Rate values and the small amount of log arithmetic every bound shares."""

from __future__ import annotations

import math
from dataclasses import dataclass

PRINTED = "printed"
CANONICAL = "canonical"


def log2(x: float) -> float:
    return math.log2(x)


def pos(x: float) -> float:
    """Positive part ``[x]^+``."""
    return x if x > 0.0 else 0.0


def p2p_capacity(P: float) -> float:
    """Point-to-point (Costa) capacity ``1/2 log2(1 + P)``."""
    return 0.5 * math.log2(1.0 + P)


@dataclass(frozen=True)
class RateBound:
    """A rate in bits per channel use.

    ``value`` is clamped at zero; ``raw`` keeps the unclamped formula value so
    that callers can see when a scheme degenerated. ``branch`` names the regime
    of the piecewise formula that produced the value and ``source`` says whether
    it is the verbatim ("printed") expression or the reconstructed
    ("canonical") one.
    """

    value: float
    branch: str
    source: str = PRINTED
    raw: float | None = None

    def __float__(self) -> float:
        return self.value

    @property
    def clamped(self) -> bool:
        return self.raw is not None and self.raw < 0.0


def rate(raw: float, branch: str, source: str = PRINTED) -> RateBound:
    """Build a :class:`RateBound` from an unclamped formula value."""
    if not math.isfinite(raw):
        if raw == -math.inf:
            return RateBound(0.0, branch, source, raw)
        raise ValueError(f"non-finite rate {raw!r} in branch {branch!r}")
    return RateBound(max(raw, 0.0), branch, source, raw)
