"""Seeded random families of strong-fading specs."""

from __future__ import annotations

import math

import numpy as np

from .. import bounds_wsfd as ws
from ..errors import ParameterRangeError
from .sweeps import StrongSpec

MAX_TRIES = 200_000


def _v1(rng: np.random.Generator) -> StrongSpec:
    """``a_1 = 0`` and consecutive squared ratios at least ``P+1``; passes by construction."""
    P = float(rng.uniform(1.0, 100.0))
    M = int(rng.integers(2, 7))
    a = [0.0, float(rng.uniform(0.5, 2.0))]
    for _ in range(M - 2):
        a.append(a[-1] * math.sqrt(P + 1.0) * (1.0 + float(rng.uniform(0.0, 0.5))))
    c = math.sqrt((P + 1.0) / a[1] ** 2 * (1.0 + float(rng.uniform(0.01, 1.0))))
    return StrongSpec(P, c, tuple(a))


def _v2_candidate(rng: np.random.Generator) -> StrongSpec:
    gamma = float(rng.uniform(0.5, 4.0))
    P = float(np.exp(rng.uniform(math.log(0.05), math.log(4.0))))
    M = int(rng.integers(2, 5))
    a1 = float(rng.uniform(0.0, 1.0))
    d2 = float(rng.uniform(1.0, 10.0))
    r = float(rng.uniform(1.0, 3.0))
    deltas = [0.0] + [d2 * r**i for i in range(M - 1)]
    a = tuple(a1 + d for d in deltas)
    c2 = max(P + 1.0, a[1] ** 2) / d2**2 * (1.0 + float(rng.uniform(0.01, 1.0)))
    return StrongSpec(P, math.sqrt(c2), a, gamma)


def random_strong_specs(seed: int, count: int, v2: bool = False) -> list[StrongSpec]:
    """``count`` specs that pass their strong-fading check; ``v2`` draws ``gamma`` in [0.5, 4] and ``a_1 >= 0``."""
    rng = np.random.default_rng([seed, 4])
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > MAX_TRIES:
            raise ParameterRangeError(f"could not draw {count} passing specs in {MAX_TRIES} tries")
        sp = _v2_candidate(rng) if v2 else _v1(rng)
        chk = (ws.strong_fading_check_v2(sp.P, sp.c, sp.a, sp.gamma) if v2
               else ws.strong_fading_check(sp.P, sp.c, sp.a))
        if chk:
            out.append(sp)
    return out
