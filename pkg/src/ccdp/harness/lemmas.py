"""Monte Carlo and bound-level validation of the channel reductions.

Three checks:

* reduction: sample the canonical channel obtained from a generalized one,
  map the samples back, and compare mean and covariance with the generalized
  channel's exact moments;
* split: remove the genie part ``c S_2`` of the state and compare the
  residual outputs with the channel of gain ``c sqrt(gamma)``;
* sandwich: outer bounds at the reduced gain must stay above inner bounds at
  the original gain (a smaller gain can only raise capacity).

Each sample moment is turned into a z-score with its large-sample standard
error: ``sqrt(var / n)`` for a mean, ``sqrt((s_ii s_jj + s_ij^2) / n)`` for a
covariance entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import bounds_ccdp_es as es
from .. import bounds_wrdp as wr
from .. import bounds_wsfd as ws
from ..channel_model import (
    ChannelSpec,
    GeneralizedChannelSpec,
    cov_wrdp,
    reduce_generalized,
    sample_gaussian,
    sample_inputs,
    sample_outputs,
    sample_states,
    split_state_gain,
)
from ..errors import ParameterRangeError

Z_LIMIT = 3.0
MIN_SAMPLES = 10_000


@dataclass
class CheckResult:
    name: str
    z_scores: list = field(default_factory=list)
    exact_error: float = 0.0  # relative error of an identity that must hold exactly
    violations: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def max_z(self) -> float:
        return max((abs(z) for z in self.z_scores), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_z < Z_LIMIT and self.exact_error <= 1e-12 and not self.violations


@dataclass
class LemmaReport:
    seed: int
    n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "max_z": c.max_z, "z_scores": list(c.z_scores),
                 "exact_error": c.exact_error, "violations": list(c.violations), **c.detail}
                for c in self.checks
            ],
        }


def moment_z_scores(samples: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> list[float]:
    """z-scores of the sample mean entries and the upper-triangular sample covariance entries."""
    n = samples.shape[0]
    mu_hat = samples.mean(axis=0)
    d = samples - mean
    s_hat = d.T @ d / n
    z = [(mu_hat[i] - mean[i]) / math.sqrt(cov[i, i] / n) for i in range(len(mean))]
    M = cov.shape[0]
    for i in range(M):
        for j in range(i, M):
            se = math.sqrt((cov[i, i] * cov[j, j] + cov[i, j] ** 2) / n)
            z.append((s_hat[i, j] - cov[i, j]) / se)
    return [float(v) for v in z]


def demo_generalized(seed: int, M: int = 3) -> GeneralizedChannelSpec:
    """A generalized channel with non-zero means, non-unit noise and a random state covariance."""
    rng = np.random.default_rng([seed, 1])
    B = rng.normal(size=(M, M))
    sigma_s = B @ B.T + 0.5 * np.eye(M)
    return GeneralizedChannelSpec(
        M=M,
        P_prime=float(rng.uniform(2.0, 20.0)),
        mu_z=rng.normal(size=M),
        sigma2=float(rng.uniform(0.5, 4.0)),
        mu_s=rng.normal(size=M),
        sigma_s_prime=sigma_s,
    )


def check_reduction(gen: GeneralizedChannelSpec, n: int, seed: int) -> CheckResult:
    spec, amap = reduce_generalized(gen)
    x = sample_inputs(spec.P, n, seed)
    s = sample_states(spec, n, seed + 1)
    y = sample_outputs(spec, x, s, seed + 2)
    y_prime = amap.inverse(y)
    target = gen.output_covariance
    exact = float(np.max(np.abs(spec.output_covariance * gen.sigma2 - target)) / np.max(np.abs(target)))
    z = moment_z_scores(y_prime, gen.output_mean, target)
    return CheckResult("reduction", z, exact, detail={"P": spec.P, "c": spec.c})


def check_split(spec: ChannelSpec, gamma: float, n: int, seed: int) -> CheckResult:
    reduced, genie = split_state_gain(spec, gamma)
    rng = np.random.default_rng([seed, 2])
    s1 = sample_gaussian(gamma * spec.sigma_s, n, rng)
    s2 = sample_gaussian((1.0 - gamma) * spec.sigma_s, n, rng)
    x = sample_inputs(spec.P, n, seed + 3)
    y = sample_outputs(spec, x, s1 + s2, seed + 4)
    y_tilde = y - spec.c * s2
    target = reduced.output_covariance
    exact = float(np.max(np.abs(gamma * spec.c**2 * spec.sigma_s + genie - spec.c**2 * spec.sigma_s)))
    if gamma == 1.0:
        exact = max(exact, float(np.max(np.abs(target - spec.output_covariance))), float(np.max(np.abs(genie))))
    z = moment_z_scores(y_tilde, np.zeros(spec.M), target)
    return CheckResult("split", z, exact, detail={"gamma": gamma, "c_tilde": reduced.c})


def _sandwich_pairs():
    return {
        "wrdp-2": (lambda P, c: wr.wrdp_outer_2(P, c), lambda P, c: wr.wrdp_inner_2(P, c)),
        "wrdp-M": (lambda P, c: wr.wrdp_outer_M(P, c, 4), lambda P, c: wr.wrdp_inner_M(P, c, 4)),
        "wsfd-2": (lambda P, c: ws.wsfd_outer_raw_2(P, c, 3.0), lambda P, c: ws.wsfd_inner_2(P, c, 3.0)),
        "ccdpes-2": (lambda P, c: es.ccdpes_outer_2(P, c, 0.5), lambda P, c: es.ccdpes_inner_2(P, c, 0.5)),
    }


def check_sandwich(P_values, c_values, gammas) -> CheckResult:
    """``outer(c sqrt(gamma)) >= inner(c)`` for every listed bound pair."""
    res = CheckResult("sandwich")
    count = 0
    for name, (outer, inner) in _sandwich_pairs().items():
        for P in P_values:
            for c in c_values:
                lo = inner(P, c).value
                for g in gammas:
                    count += 1
                    hi = outer(P, c * math.sqrt(g)).value
                    if hi + 1e-9 < lo:
                        res.violations.append({"pair": name, "P": P, "c": c, "gamma": g, "outer": hi, "inner": lo})
    res.detail["evaluations"] = count
    return res


def lemma_validation(seed: int = 7, n: int = 100_000, P: float = 4.0, c2: float = 4.0, M: int = 2,
                     gamma: float = 0.25, sigma_s=None) -> LemmaReport:
    """Run all three checks; ``sigma_s`` (default: independent states) sets the split-check channel."""
    if n < MIN_SAMPLES:
        raise ParameterRangeError(f"n must be >= {MIN_SAMPLES}, got {n}")
    sigma_s = cov_wrdp(M) if sigma_s is None else sigma_s
    spec = ChannelSpec(M=M, P=P, c=math.sqrt(c2), sigma_s=sigma_s)
    rep = LemmaReport(seed, n)
    rep.checks.append(check_reduction(demo_generalized(seed), n, seed))
    rep.checks.append(check_split(spec, gamma, n, seed + 10))
    rep.checks.append(check_split(spec, 1.0, n, seed + 20))
    grid_P = 2.0 ** np.arange(-1, 21, 3)
    grid_c = 2.0 ** np.arange(-2, 13, 1.5)
    rep.checks.append(check_sandwich(grid_P, grid_c, (0.0, 0.1, 0.25, 0.5, 0.9, 1.0)))
    return rep
