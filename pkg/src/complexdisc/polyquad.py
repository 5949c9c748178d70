"""Real orthogonal polynomials, Jacobi matrices and Gauss quadrature.

A measure ``w(x) dx`` on ``[a, b]`` defines the inner product
``<f, g> = int w f g dx``.  The monic orthogonal family obeys

    p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x),

and the Gauss rule of order ``n`` is read off the eigen-decomposition of
the symmetric tridiagonal Jacobi matrix (Golub-Welsch).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, inf, isfinite

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import eigh_tridiagonal

from .errors import ConfigurationError, LossOfOrthogonalityError, NumericError

__all__ = [
    "RealMeasure",
    "RecurrenceCoefficients",
    "QuadratureRule",
    "inner_product_real",
    "laguerre_recurrence",
    "stieltjes_recurrence",
    "jacobi_matrix",
    "golub_welsch",
    "gauss_rule",
    "quad_integrate",
]

# Weights below this (relative to the mass) carry no information in double
# precision and only risk inf * 0 in the Stieltjes sweep.
_TINY_WEIGHT = 1e-290


@dataclass(frozen=True)
class RealMeasure:
    """A nonnegative weight on a real interval.

    Use :meth:`laguerre` for ``c x^s e^{-x}`` on ``[0, inf)`` or
    :meth:`tabulated` for a discrete measure given by points and masses.
    """

    support: tuple[float, float]
    weight_id: str
    params: dict = field(default_factory=dict)
    mass: float = 1.0
    points: np.ndarray | None = field(default=None, repr=False, compare=False)
    masses: np.ndarray | None = field(default=None, repr=False, compare=False)

    @classmethod
    def laguerre(cls, c: float = 1.0, s: float = 0.0) -> "RealMeasure":
        if not (c > 0 and isfinite(c)):
            raise ConfigurationError(f"laguerre prefactor must be positive, got c={c}")
        if not (s > -1 and isfinite(s)):
            raise ConfigurationError(f"laguerre power must exceed -1, got s={s}")
        return cls((0.0, inf), "laguerre_like", {"c": float(c), "s": float(s)}, c * gamma(s + 1.0))

    @classmethod
    def tabulated(cls, points, masses) -> "RealMeasure":
        x = np.asarray(points, dtype=float)
        w = np.asarray(masses, dtype=float)
        if x.ndim != 1 or x.shape != w.shape or x.size == 0:
            raise ConfigurationError("tabulated measure needs matching 1-D points and masses")
        if np.any(w < 0) or not np.all(np.isfinite(w)) or not np.all(np.isfinite(x)):
            raise ConfigurationError("tabulated masses must be finite and nonnegative")
        mass = float(w.sum())
        if mass <= 0:
            raise ConfigurationError("tabulated measure has zero mass")
        return cls((float(x.min()), float(x.max())), "tabulated", {}, mass, x, w)

    def discretize(self, n_points: int) -> tuple[np.ndarray, np.ndarray]:
        """Return a discrete proxy ``(x_i, w_i)`` exact for degree ``2 n_points - 1``.

        Nodes far out on ``[0, inf)`` carry weights like ``e^{-x}``; these are
        computed from Christoffel sums so they keep their relative accuracy,
        and weights that underflow are dropped.
        """
        if self.weight_id == "tabulated":
            return self.points, self.masses
        r = laguerre_recurrence(self.params["s"], n_points, self.params["c"])
        x, w = _reference_rule(r)
        keep = w > _TINY_WEIGHT * self.mass
        return x[keep], w[keep]


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Three-term coefficients of a monic orthogonal family.

    ``alpha`` has length ``n``.  ``beta`` has length ``n + 1``: ``beta[0]`` is
    the mass and ``beta[n]`` links ``p_n`` back to ``p_{n-1}``, which lets
    callers evaluate the degree-``n`` polynomial whose zeros are the nodes.
    """

    alpha: np.ndarray
    beta: np.ndarray

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def mass(self) -> float:
        return float(self.beta[0])

    def truncate(self, n: int) -> "RecurrenceCoefficients":
        if not 1 <= n <= self.n:
            raise ConfigurationError(f"cannot truncate {self.n} coefficients to {n}")
        return RecurrenceCoefficients(self.alpha[:n].copy(), self.beta[: n + 1].copy())


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    mass: complex | float
    kind: str = "real"

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def degree(self) -> int:
        """Polynomial degree integrated exactly."""
        return 2 * self.n - 1


def _as_poly(f) -> Polynomial:
    if isinstance(f, Polynomial):
        return f
    if callable(f):
        raise ConfigurationError("inner_product_real needs a polynomial, not an arbitrary callable")
    return Polynomial(np.atleast_1d(np.asarray(f, dtype=float)))


def inner_product_real(m: RealMeasure, f, g) -> float:
    """``int_a^b w(x) f(x) g(x) dx`` for polynomials ``f`` and ``g``.

    Polynomials may be given as :class:`numpy.polynomial.Polynomial` or as
    ascending coefficient sequences.  A Gauss rule of the measure's own
    family is used, so the result is exact up to rounding.
    """
    pf, pg = _as_poly(f), _as_poly(g)
    if m.weight_id == "tabulated":
        x, w = m.points, m.masses
    else:
        n_ref = (pf.degree() + pg.degree()) // 2 + 1
        rule = gauss_rule(m, n_ref)
        x, w = rule.nodes, rule.weights
    return float(np.sum(w * pf(x) * pg(x)))


def laguerre_recurrence(s: float, n: int, c: float = 1.0) -> RecurrenceCoefficients:
    """Closed-form coefficients for ``c x^s e^{-x}``: ``alpha_k = 2k+s+1``, ``beta_k = k(k+s)``."""
    if n < 1:
        raise ConfigurationError("need n >= 1")
    k = np.arange(n + 1, dtype=float)
    alpha = 2.0 * k[:n] + s + 1.0
    beta = k * (k + s)
    beta[0] = c * gamma(s + 1.0)
    return RecurrenceCoefficients(alpha, beta)


def _discrete_stieltjes(x: np.ndarray, w: np.ndarray, n: int) -> RecurrenceCoefficients:
    mass = float(w.sum())
    alpha = np.empty(n)
    beta = np.empty(n + 1)
    beta[0] = mass
    # orthonormal sweep keeps the sampled values bounded by 1/sqrt(w_i)
    q_prev = np.zeros_like(x)
    q = np.full_like(x, 1.0 / np.sqrt(mass))
    sb_prev = 0.0
    for k in range(n):
        alpha[k] = np.sum(w * x * q * q)
        r = (x - alpha[k]) * q - sb_prev * q_prev
        nrm = np.sum(w * r * r)
        if not (np.isfinite(nrm) and nrm > 0.0) or not np.isfinite(alpha[k]):
            raise LossOfOrthogonalityError(k + 1, nrm)
        beta[k + 1] = nrm
        sb = np.sqrt(nrm)
        q_prev, q = q, r / sb
        sb_prev = sb
    return RecurrenceCoefficients(alpha, beta)


def _scaled_orthonormal_sweep(r: RecurrenceCoefficients, x: np.ndarray):
    """Evaluate pi_n, pi_n' and log(sum_{k<n} pi_k^2) with overflow rescaling."""
    n = r.n
    sb = np.sqrt(r.beta)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / sb[0])
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    sumsq = np.zeros_like(x)
    log_scale = np.zeros_like(x)
    for k in range(n):
        sumsq += p * p
        p_next = ((x - r.alpha[k]) * p - sb[k] * p_prev) / sb[k + 1] if k else (x - r.alpha[0]) * p / sb[1]
        dp_next = (p + (x - r.alpha[k]) * dp - (sb[k] * dp_prev if k else 0.0)) / sb[k + 1]
        p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
        big = np.abs(p) > 1e100
        if np.any(big):
            f = 1e-100
            for arr in (p_prev, p, dp_prev, dp):
                arr[big] *= f
            sumsq[big] *= f * f
            log_scale[big] += 100.0 * np.log(10.0)
    return p, dp, np.log(sumsq) + 2.0 * log_scale


def _reference_rule(r: RecurrenceCoefficients) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule with Newton-polished nodes and relative-accurate weights."""
    n = r.n
    if n == 1:
        return np.array([r.alpha[0]], float), np.array([r.mass])
    x = eigh_tridiagonal(r.alpha, np.sqrt(r.beta[1:n]), eigvals_only=True)
    x = np.sort(x)
    for _ in range(2):
        p, dp, _ = _scaled_orthonormal_sweep(r, x)
        x = x - p / dp
    _, _, log_sumsq = _scaled_orthonormal_sweep(r, x)
    return x, np.exp(-log_sumsq)


def stieltjes_recurrence(m: RealMeasure, n_max: int, method: str = "auto") -> RecurrenceCoefficients:
    """Recurrence coefficients ``alpha_0..alpha_{n-1}``, ``beta_0..beta_n``.

    Parameters
    ----------
    m : RealMeasure
    n_max : int
        Number of ``alpha`` coefficients (Gauss rule order).
    method : {"auto", "closed", "stieltjes"}
        ``closed`` uses the generalized-Laguerre formulas (laguerre_like only);
        ``stieltjes`` runs the discretized Stieltjes procedure on a reference
        rule with ``8 n_max`` points.  ``auto`` picks ``closed`` when available.
    """
    if n_max < 1:
        raise ConfigurationError("n_max must be >= 1")
    if method not in ("auto", "closed", "stieltjes"):
        raise ConfigurationError(f"unknown method {method!r}")
    if method == "closed" and m.weight_id != "laguerre_like":
        raise ConfigurationError("closed-form recurrence only exists for laguerre_like weights")
    if m.weight_id == "laguerre_like" and method in ("auto", "closed"):
        return laguerre_recurrence(m.params["s"], n_max, m.params["c"])
    if m.weight_id == "tabulated":
        x, w = m.points, m.masses
        if np.count_nonzero(w) < n_max:
            raise ConfigurationError(
                f"tabulated measure has {np.count_nonzero(w)} support points, fewer than n_max={n_max}"
            )
    else:
        x, w = m.discretize(8 * n_max)
    return _discrete_stieltjes(x, w, n_max)


def jacobi_matrix(r: RecurrenceCoefficients) -> np.ndarray:
    """Dense symmetric tridiagonal matrix with ``alpha`` on the diagonal and ``sqrt(beta_k)`` beside it."""
    n = r.n
    off = np.sqrt(r.beta[1:n])
    return np.diag(r.alpha) + np.diag(off, 1) + np.diag(off, -1)


def golub_welsch(r: RecurrenceCoefficients, mass: float | None = None, weights: str = "christoffel") -> QuadratureRule:
    """Gauss nodes (ascending) and weights from the Jacobi matrix of ``r``.

    ``weights="eigvec"`` returns ``mass * (first eigvec component)^2``.  Those
    components are only accurate in the absolute sense, so weights far below
    ``eps * mass`` (the outer nodes of a long half-line rule) come out as noise
    or zero.  The default ``"christoffel"`` polishes the nodes by Newton steps
    and takes ``1 / sum_k p_k(x_i)^2`` over the orthonormal family instead,
    which keeps every weight to relative precision.
    """
    if weights not in ("christoffel", "eigvec"):
        raise ConfigurationError(f"unknown weight route {weights!r}")
    mass = r.mass if mass is None else float(mass)
    n = r.n
    if n == 1:
        return QuadratureRule(np.array([r.alpha[0]], float), np.array([mass]), mass)
    if np.any(r.beta[1:n] <= 0):
        k = int(np.argmax(r.beta[1:n] <= 0)) + 1
        raise LossOfOrthogonalityError(k, r.beta[k])
    if weights == "christoffel":
        try:
            x, w = _reference_rule(r)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"tridiagonal eigensolver failed: {exc}") from exc
        return QuadratureRule(x, w * (mass / r.mass), mass)
    try:
        nodes, vecs = eigh_tridiagonal(r.alpha, np.sqrt(r.beta[1:n]))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"tridiagonal eigensolver failed: {exc}") from exc
    order = np.argsort(nodes, kind="stable")
    v0 = vecs[0, order]
    return QuadratureRule(nodes[order], mass * v0 * v0, mass)


def gauss_rule(m: RealMeasure, n: int) -> QuadratureRule:
    """Shortcut: ``golub_welsch(stieltjes_recurrence(m, n), m.mass)``."""
    if m.weight_id == "laguerre_like":
        r = laguerre_recurrence(m.params["s"], n, m.params["c"])
    else:
        r = stieltjes_recurrence(m, n)
    return golub_welsch(r, m.mass)


def quad_integrate(rule: QuadratureRule, f):
    """``sum_i w_i f(x_i)``; ``f`` must accept an array of nodes."""
    return np.sum(rule.weights * f(rule.nodes))
