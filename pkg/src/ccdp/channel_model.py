"""Compound Gaussian state channel instances.

The canonical channel is ``Y_m = X + c S_m + Z_m`` for ``m = 1..M`` with
``E[X^2] <= P``, unit-variance noise and jointly Gaussian states with
covariance ``sigma_s``. This module builds the three covariance families,
reduces a general affine/scaled channel to canonical form, splits the state
gain for the genie argument, and draws reproducible samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateStateError,
    DimensionError,
    FactorizationError,
    FeasibilityError,
    ParameterRangeError,
    SingularCovarianceError,
)

SYMMETRY_RTOL = 1e-12
PSD_RTOL = 1e-9
# eigenvalues this small relative to the largest are treated as exact zeros
# by the sampler so that rank-deficient covariances give exactly rank-deficient samples
NULL_RTOL = 1e-12


def check_covariance(cov, name: str = "covariance") -> np.ndarray:
    """Return ``cov`` as a float array after checking it is square and symmetric."""
    arr = np.array(cov, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    scale = max(float(np.max(np.abs(arr))), 1.0)
    if np.max(np.abs(arr - arr.T)) > SYMMETRY_RTOL * scale:
        raise ParameterRangeError(f"{name} is not symmetric")
    return arr


def is_psd(cov: np.ndarray, rtol: float = PSD_RTOL) -> bool:
    w = np.linalg.eigvalsh(cov)
    lam_max = max(float(w[-1]), 0.0)
    return bool(w[0] >= -rtol * lam_max)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Canonical CCDP channel: receiver count, power, state gain, state covariance."""

    M: int
    P: float
    c: float
    sigma_s: np.ndarray

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise DimensionError(f"M must be an integer >= 1, got {self.M}")
        if not self.P > 0:
            raise ParameterRangeError(f"P must be > 0, got {self.P}")
        if not self.c >= 0:
            raise ParameterRangeError(f"c must be >= 0, got {self.c}")
        cov = check_covariance(self.sigma_s, "sigma_s")
        if cov.shape[0] != self.M:
            raise DimensionError(f"sigma_s is {cov.shape[0]}x{cov.shape[0]} but M={self.M}")
        if not is_psd(cov):
            raise FactorizationError("sigma_s is not positive semidefinite")
        object.__setattr__(self, "sigma_s", cov)

    @property
    def output_covariance(self) -> np.ndarray:
        """Covariance of ``(Y_1..Y_M)`` for a Gaussian input independent of the states."""
        M = self.M
        return self.P * np.ones((M, M)) + self.c**2 * self.sigma_s + np.eye(M)


@dataclass(frozen=True, eq=False)
class GeneralizedChannelSpec:
    """``Y'_m = X' + S'_m + Z'_m`` with arbitrary means, noise variance and state covariance."""

    M: int
    P_prime: float
    mu_z: np.ndarray
    sigma2: float
    mu_s: np.ndarray
    sigma_s_prime: np.ndarray

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise DimensionError(f"M must be an integer >= 1, got {self.M}")
        if not self.sigma2 > 0:
            raise ParameterRangeError(f"sigma2 must be > 0, got {self.sigma2}")
        if not self.P_prime > 0:
            raise ParameterRangeError(f"P_prime must be > 0, got {self.P_prime}")
        cov = check_covariance(self.sigma_s_prime, "sigma_s_prime")
        if cov.shape[0] != self.M:
            raise DimensionError("sigma_s_prime does not match M")
        if not is_psd(cov):
            raise FactorizationError("sigma_s_prime is not positive semidefinite")
        mu_z = np.broadcast_to(np.asarray(self.mu_z, dtype=float), (self.M,)).copy()
        mu_s = np.broadcast_to(np.asarray(self.mu_s, dtype=float), (self.M,)).copy()
        object.__setattr__(self, "sigma_s_prime", cov)
        object.__setattr__(self, "mu_z", mu_z)
        object.__setattr__(self, "mu_s", mu_s)

    @property
    def output_mean(self) -> np.ndarray:
        return self.mu_s + self.mu_z

    @property
    def output_covariance(self) -> np.ndarray:
        M = self.M
        return self.P_prime * np.ones((M, M)) + self.sigma_s_prime + self.sigma2 * np.eye(M)


@dataclass(frozen=True, eq=False)
class AffineOutputMap:
    """Per-receiver map ``Y_m = (Y'_m - offset_m) / scale`` and its inverse."""

    offset: np.ndarray
    scale: float

    def forward(self, y_prime: np.ndarray) -> np.ndarray:
        return (np.asarray(y_prime, dtype=float) - self.offset) / self.scale

    def inverse(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(y, dtype=float) * self.scale + self.offset


# -- covariance families ---------------------------------------------------


def cov_wrdp(M: int) -> np.ndarray:
    """Independent unit-variance states: the M x M identity."""
    if int(M) != M or M < 1:
        raise DimensionError(f"M must be an integer >= 1, got {M}")
    return np.eye(int(M))


def cov_wsfd(a) -> np.ndarray:
    """States that are scaled copies ``a_m S`` of one sequence: the outer product ``a a^T``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("fading vector must be a non-empty 1-D sequence")
    return np.outer(a, a)


def ccdp_es_feasible(M: int, rho: float) -> bool:
    """True iff the equi-correlated covariance with correlation ``rho`` is PSD."""
    if int(M) != M or M < 1:
        raise DimensionError(f"M must be an integer >= 1, got {M}")
    if M == 1:
        return -1.0 <= rho <= 1.0
    lo = -1.0 / (M - 1)
    # the boundary is computed as -1/(M-1); allow for the rounding of that expression
    return lo - 1e-12 <= rho <= 1.0


def cov_ccdp_es(M: int, rho: float) -> np.ndarray:
    """``(1 - rho) I + rho 11^T``: unit variances, pairwise correlation ``rho``."""
    if not ccdp_es_feasible(M, rho):
        raise FeasibilityError(
            f"rho={rho} infeasible for M={M}; valid range is [{-1.0 / (M - 1):.6g}, 1]"
        )
    M = int(M)
    return (1.0 - rho) * np.eye(M) + rho * np.ones((M, M))


def det_ccdp_es_principal(m: int, rho: float) -> float:
    """Determinant of the m x m leading minor, via the matrix determinant lemma."""
    if int(m) != m or m < 1:
        raise DimensionError(f"m must be an integer >= 1, got {m}")
    if rho == 1.0:
        raise SingularCovarianceError("rho = 1 makes every minor of order >= 2 singular (limit 0)")
    return (1.0 - rho) ** m * (1.0 + m * rho / (1.0 - rho))


# -- reductions ------------------------------------------------------------


def reduce_generalized(gen: GeneralizedChannelSpec) -> tuple[ChannelSpec, AffineOutputMap]:
    """Reduce a generalized channel to canonical form.

    Means are removed, outputs are scaled to unit noise variance, and the
    state with the smallest variance fixes the state gain ``c``. Returns the
    canonical spec together with the output map that carries generalized
    samples onto canonical ones.
    """
    var = np.diag(gen.sigma_s_prime)
    var_min = float(np.min(var))
    if var_min <= 0.0:
        raise DegenerateStateError("a state has zero variance; cannot normalise the state gain")
    sigma = math.sqrt(gen.sigma2)
    P = gen.P_prime / gen.sigma2
    c = math.sqrt(var_min / gen.sigma2)
    sigma_s = gen.sigma_s_prime / var_min
    spec = ChannelSpec(M=gen.M, P=P, c=c, sigma_s=sigma_s)
    return spec, AffineOutputMap(offset=gen.output_mean, scale=sigma)


def split_state_gain(spec: ChannelSpec, gamma: float) -> tuple[ChannelSpec, np.ndarray]:
    """Split the state into a retained part and a genie part.

    With ``S = S1 + S2``, ``S1 ~ N(0, gamma Sigma)`` and ``S2 ~ N(0, (1-gamma) Sigma)``,
    removing ``c S2`` leaves a channel with gain ``c sqrt(gamma)``. Returns that
    channel and the covariance ``(1 - gamma) c^2 Sigma`` of the removed term.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ParameterRangeError(f"gamma must lie in [0, 1], got {gamma}")
    reduced = ChannelSpec(M=spec.M, P=spec.P, c=spec.c * math.sqrt(gamma), sigma_s=spec.sigma_s)
    genie = (1.0 - gamma) * spec.c**2 * spec.sigma_s
    return reduced, genie


# -- sampling --------------------------------------------------------------


def sqrt_factor(cov: np.ndarray) -> np.ndarray:
    """Symmetric square root of a PSD matrix.

    Eigenvalues in ``[-1e-9 lam_max, 0)`` are clipped to zero; anything more
    negative is rejected.
    """
    cov = check_covariance(cov)
    w, v = np.linalg.eigh(cov)
    lam_max = max(float(w[-1]), 0.0)
    if w[0] < -PSD_RTOL * lam_max:
        raise FactorizationError(f"covariance has eigenvalue {w[0]:.3e} < 0")
    w = np.where(w <= NULL_RTOL * lam_max, 0.0, w)
    return (v * np.sqrt(w)) @ v.T


def sample_gaussian(cov: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    root = sqrt_factor(cov)
    g = rng.standard_normal((int(n), root.shape[0]))
    return g @ root


def sample_states(spec: ChannelSpec, n: int, seed: int) -> np.ndarray:
    """``n x M`` zero-mean state samples with covariance ``spec.sigma_s``."""
    if n < 0:
        raise DimensionError("sample count must be >= 0")
    rng = np.random.default_rng(seed)
    return sample_gaussian(spec.sigma_s, n, rng)


def sample_outputs(
    spec: ChannelSpec,
    x,
    states,
    seed: int,
    identical_noise: bool = False,
) -> np.ndarray:
    """``Y_m = x + c S_m + Z_m`` for every sample and receiver.

    ``x`` has shape ``(n,)``; ``states`` has shape ``(n, M)``. Noise is drawn
    independently per receiver unless ``identical_noise`` is set, in which case
    every receiver sees the same noise sample (a test-harness option; the
    capacity does not depend on the noise correlation).
    """
    x = np.asarray(x, dtype=float)
    states = np.asarray(states, dtype=float)
    if x.ndim != 1 or states.ndim != 2 or states.shape != (x.shape[0], spec.M):
        raise DimensionError(
            f"shape mismatch: x {x.shape}, states {states.shape}, expected (n,) and (n, {spec.M})"
        )
    rng = np.random.default_rng(seed)
    n = x.shape[0]
    if identical_noise:
        z = np.repeat(rng.standard_normal((n, 1)), spec.M, axis=1)
    else:
        z = rng.standard_normal((n, spec.M))
    return x[:, None] + spec.c * states + z


def sample_inputs(P: float, n: int, seed: int) -> np.ndarray:
    """i.i.d. ``N(0, P)`` input samples (the Gaussian input used by every scheme here)."""
    rng = np.random.default_rng(seed)
    return math.sqrt(P) * rng.standard_normal(int(n))
