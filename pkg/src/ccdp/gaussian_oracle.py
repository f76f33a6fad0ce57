"""Exact mutual information for linear-Gaussian constructions.

A :class:`JointGaussian` is assembled as a linear map of independent
zero-mean base variables, so its covariance is ``L D L^T`` and every
entropy, conditional entropy and mutual information follows from log
determinants of sub-blocks. Conditional covariances use Schur complements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bounds_wrdp import check_alpha, check_pc
from .errors import DegenerateStateError, DimensionError, ParameterRangeError, SingularCovarianceError

LOG2_2PIE = math.log2(2.0 * math.pi * math.e)
# eigenvalues below this fraction of the largest one mark a singular block
SINGULAR_RTOL = 1e-13


def logdet2(cov: np.ndarray) -> float:
    """``log2 det(cov)`` via eigenvalues; raises on a singular or indefinite matrix."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    w = np.linalg.eigvalsh(cov)
    if w.size == 0:
        return 0.0
    if w[0] <= SINGULAR_RTOL * max(w[-1], 0.0) or w[-1] <= 0.0:
        raise SingularCovarianceError(f"covariance is singular (smallest eigenvalue {w[0]:.3e})")
    return float(np.sum(np.log2(w)))


def gaussian_entropy(cov) -> float:
    """Differential entropy ``0.5 log2((2 pi e)^n det cov)`` in bits."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    n = cov.shape[0]
    return 0.5 * (n * LOG2_2PIE + logdet2(cov))


@dataclass(frozen=True, eq=False)
class JointGaussian:
    """Named zero-mean jointly Gaussian variables."""

    names: tuple
    cov: np.ndarray

    def __post_init__(self):
        names = tuple(self.names)
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (len(names), len(names)):
            raise DimensionError(f"covariance shape {cov.shape} does not match {len(names)} names")
        if len(set(names)) != len(names):
            raise DimensionError("variable names must be unique")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def from_linear(cls, names: Sequence[str], L, base_var) -> "JointGaussian":
        """Variables ``L @ B`` for independent base variables ``B`` with variances ``base_var``."""
        L = np.atleast_2d(np.asarray(L, dtype=float))
        d = np.asarray(base_var, dtype=float)
        if L.shape != (len(names), d.size):
            raise DimensionError(f"map shape {L.shape} does not match {len(names)} names x {d.size} base variables")
        return cls(tuple(names), (L * d) @ L.T)

    def index(self, labels: Iterable[str]) -> list[int]:
        pos = {n: i for i, n in enumerate(self.names)}
        try:
            return [pos[x] for x in labels]
        except KeyError as e:
            raise DimensionError(f"unknown variable {e.args[0]!r}") from None

    def block(self, rows: Iterable[str], cols: Iterable[str] | None = None) -> np.ndarray:
        r = self.index(rows)
        c = r if cols is None else self.index(cols)
        return self.cov[np.ix_(r, c)]

    def cond_cov(self, target: Sequence[str], given: Sequence[str] = ()) -> np.ndarray:
        """Covariance of ``target`` given ``given`` (Schur complement)."""
        A = self.block(target)
        if not given:
            return A
        B = self.block(given)
        C = self.block(target, given)
        return A - C @ np.linalg.pinv(B, rcond=1e-14, hermitian=True) @ C.T

    def entropy(self, target: Sequence[str], given: Sequence[str] = ()) -> float:
        return gaussian_entropy(self.cond_cov(list(target), list(given)))

    def mi(self, a: Sequence[str], b: Sequence[str], given: Sequence[str] = ()) -> float:
        """``I(a; b | given)`` in bits, as a difference of two log-dets of the same dimension."""
        a, b, given = list(a), list(b), list(given)
        return 0.5 * (logdet2(self.cond_cov(a, given)) - logdet2(self.cond_cov(a, given + b)))


@dataclass(frozen=True)
class LinearAssignment:
    """Auxiliary ``U = X_c + k c S`` where ``X_c`` carries power ``alpha P`` and ``X_p`` the rest.

    ``k`` multiplies the effective state ``c S`` seen at the reference
    receiver; ``k = alpha P / (P + 1)`` is the single-receiver optimum.
    """

    k: float
    alpha: float = 1.0

    def __post_init__(self):
        check_alpha(self.alpha)
        if not math.isfinite(self.k):
            raise ParameterRangeError(f"k must be finite, got {self.k}")


def costa_k(P: float, alpha: float = 1.0) -> float:
    """Precoding coefficient for power ``alpha P`` with ``(1 - alpha) P`` of extra Gaussian noise."""
    return alpha * P / (P + 1.0)


def compound_joint(P: float, c: float, a, assignment: LinearAssignment) -> JointGaussian:
    """Joint law of ``(X, S, U, Y_1..Y_M)`` with ``Y_m = X_c + X_p + c a_m S + Z_m``."""
    check_pc(P, c)
    a = np.atleast_1d(np.asarray(getattr(a, "a", a), dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("fading vector must be non-empty")
    M = a.size
    al = assignment.alpha
    # base variables: X_c, X_p, S, Z_1..Z_M
    var = np.concatenate([[al * P, (1.0 - al) * P, 1.0], np.ones(M)])
    rows = [
        np.r_[1.0, 1.0, 0.0, np.zeros(M)],
        np.r_[0.0, 0.0, 1.0, np.zeros(M)],
        np.r_[1.0, 0.0, assignment.k * c, np.zeros(M)],
    ]
    for m in range(M):
        rows.append(np.r_[1.0, 1.0, c * a[m], np.eye(M)[m]])
    names = ["X", "S", "U"] + [f"Y{m + 1}" for m in range(M)]
    return JointGaussian.from_linear(names, np.array(rows), var)


def gp_rate_gaussian(P: float, c: float, assignment: LinearAssignment) -> float:
    """``I(Y; U) - I(U; S)`` for the single-receiver channel ``Y = X + c S + Z``."""
    return compound_common_rate(P, c, [1.0], assignment)


def compound_common_rate(P: float, c: float, a, assignment: LinearAssignment) -> float:
    """``h(U | S) - max_m h(U | Y_m)``: common rate decodable by every receiver."""
    jg = compound_joint(P, c, a, assignment)
    ys = [n for n in jg.names if n.startswith("Y")]
    h_us = jg.entropy(["U"], ["S"])
    return h_us - max(jg.entropy(["U"], [y]) for y in ys)


def optimize_inner_2wsfd(P: float, c: float, a: float, alpha_grid, k_grid) -> tuple[float, float, float]:
    """Exhaustive scan of the superposition scheme: common layer plus a time-shared private layer.

    Returns ``(rate, alpha, k)``. The private layer adds ``0.25 log2(1 + (1-alpha) P)``.
    Ties go to the first grid point in scan order (alpha outer, k inner).
    """
    check_pc(P, c)
    alphas = np.asarray(alpha_grid, dtype=float).ravel()
    ks = np.asarray(k_grid, dtype=float).ravel()
    if alphas.size == 0 or ks.size == 0:
        raise DimensionError("alpha and k grids must be non-empty")
    best = (-math.inf, float("nan"), float("nan"))
    for al in alphas:
        check_alpha(al)
        v = _common_rate_2_batch(P, c, a, float(al), ks)
        v = v + 0.25 * math.log2(1.0 + (1.0 - al) * P)
        i = int(np.argmax(v))
        if v[i] > best[0]:
            best = (float(v[i]), float(al), float(ks[i]))
    return best


def _common_rate_2_batch(P: float, c: float, a: float, alpha: float, ks: np.ndarray) -> np.ndarray:
    """Closed Gaussian algebra for ``compound_common_rate`` over many ``k`` at once (two receivers).

    All quantities are scalar conditional variances, so the batch avoids
    building one covariance per ``k``; results agree with the matrix path.
    """
    Pc, Pp = alpha * P, (1.0 - alpha) * P
    ks = np.asarray(ks, dtype=float)
    var_u_s = np.full_like(ks, Pc)
    out = None
    for am in (1.0, a):
        # U = X_c + k c S ; Y = X_c + X_p + c a_m S + Z
        vu = Pc + ks**2 * c * c
        vy = Pc + Pp + c * c * am * am + 1.0
        cuy = Pc + ks * c * c * am
        cond = vu - cuy**2 / vy
        out = cond if out is None else np.maximum(out, cond)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = 0.5 * (np.log2(var_u_s) - np.log2(out))
    if alpha == 0.0:
        # no common layer: U carries no message
        r = np.zeros_like(ks)
    return r


# -- proof machinery ----------------------------------------------------------


def tridiag_matrix(m: int) -> np.ndarray:
    """``m x m`` matrix with 2 on the diagonal and -1 next to it."""
    if int(m) != m or m < 1:
        raise DimensionError(f"m must be an integer >= 1, got {m}")
    m = int(m)
    return 2.0 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1)


def tridiag_cond_variance(m: int) -> float:
    """Variance of the m-th entry given the first m-1 under :func:`tridiag_matrix`: ``(m+1)/m``."""
    if int(m) != m or m < 1:
        raise DimensionError(f"m must be an integer >= 1, got {m}")
    return (m + 1.0) / m


def _partial(c: float, a, lo: int, hi: int) -> float:
    """``sum_{j=lo}^{hi} c^2 a_j^2`` with 1-based inclusive indices."""
    a = np.asarray(getattr(a, "a", a), dtype=float)
    return float(c * c * np.sum(a[lo - 1 : hi] ** 2))


def mrc_sigma_hat(c: float, a, m: int) -> float:
    """Noise variance of the maximal-ratio combination of receivers 2..m-1: ``1 / sum c^2 a_j^2``."""
    a = np.asarray(getattr(a, "a", a), dtype=float)
    if m < 3 or m > a.size:
        raise DimensionError(f"m must lie in [3, {a.size}], got {m}")
    s = _partial(c, a, 2, m - 1)
    if s <= 0.0:
        raise DegenerateStateError("combined signal energy is zero")
    return 1.0 / s


def kappa_m(P: float, c: float, a, m: int) -> float:
    """Per-step constant of the strong-fading converse recursion."""
    a = np.asarray(getattr(a, "a", a), dtype=float)
    if m < 3 or m > a.size:
        raise DimensionError(f"m must lie in [3, {a.size}], got {m}")
    lo = _partial(c, a, 2, m - 1)
    hi = _partial(c, a, 2, m)
    if lo <= 0.0 or hi <= 0.0:
        raise DegenerateStateError("partial energy sums must be positive")
    am2 = c * c * a[m - 1] ** 2
    inner = ((lo + 1.0) / lo) * (((P + 1.0) * lo + am2) / hi)
    return 0.5 * math.log2(inner) + 0.5 * math.log2(m - 1)


def cond_var_y3_given_combined(P: float, c: float, a2: float, a3: float, rho_xs: float, noise_var: float = 2.0) -> float:
    """``Var(Y_3 | c a_2 S + W)`` when ``X`` and ``S`` have correlation ``rho_xs``.

    ``Y_3 = X + c a_3 S + Z_3`` and ``W`` is independent noise of variance
    ``noise_var``. Used to locate the correlation that maximises the entropy
    of the third output given the combined observation.
    """
    if not -1.0 <= rho_xs <= 1.0:
        raise ParameterRangeError(f"rho_xs must lie in [-1, 1], got {rho_xs}")
    sp = math.sqrt(P)
    # base: G1, G2 (build X, S with correlation rho_xs), Z3, W
    L = np.array(
        [
            [sp * rho_xs + c * a3, sp * math.sqrt(1.0 - rho_xs**2), 1.0, 0.0],
            [c * a2, 0.0, 0.0, 1.0],
        ]
    )
    jg = JointGaussian.from_linear(["Y3", "V"], L, [1.0, 1.0, 1.0, noise_var])
    return float(jg.cond_cov(["Y3"], ["V"])[0, 0])


def rho_xs_star(P: float, c: float, a2: float, a3: float) -> float:
    """Stationary point ``2 a_3 / (c sqrt(P) a_2^2)`` of the conditional variance above."""
    return 2.0 * a3 / (c * math.sqrt(P) * a2 * a2)
