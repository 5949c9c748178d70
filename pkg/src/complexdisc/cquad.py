"""Complex Gauss quadrature on the lower unit semicircle.

The bilinear form (no complex conjugation)

    [f, g] = int_pi^{2pi} w(e^{i theta}) f(e^{i theta}) g(e^{i theta}) d theta

admits a three-term recurrence ``sqrt(nu_{k+1}) eta_{k+1} = (z - i mu_k) eta_k
- sqrt(nu_k) eta_{k-1}`` whose complex symmetric Jacobi matrix ``M_c`` yields
nodes in the open lower half disk.

Sampling the orthonormal ``eta_k`` on the arc is hopeless past degree ~25:
they grow like ``(1 + sqrt 2)^k`` at ``z = -i`` while ``[eta_k, eta_k] = 1``,
so every sum cancels catastrophically.  For analytic integrands the arc can
be collapsed onto the diameter instead.  Writing ``h = w f g``,

    [f, g] = pi h(0) - i int_{-1}^{1} (h(x) - h(0)) / x dx,

and on ``[-1, 1]`` the ``eta_k`` stay O(1).  :func:`complex_recurrence` runs
its Stieltjes sweep on that representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import BreakdownError, ConfigurationError, DegeneracyError, NumericError
from .polyquad import QuadratureRule

__all__ = [
    "ContourMeasure",
    "ComplexRecurrence",
    "contour_inner_product",
    "complex_recurrence",
    "complex_jacobi",
    "contour_rule",
    "contour_integrate",
    "eval_eta",
    "semicircle_rule",
]

N_MAX_SAFE = 128
_RESIDUAL_LIMIT = 1e-6
_COND_LIMIT = 1e12


def _unit(z):
    return np.ones_like(z)


@dataclass(frozen=True)
class ContourMeasure:
    """Weight on the lower unit semicircle ``z = e^{i theta}``, ``theta in [pi, 2 pi]``.

    ``weight`` must be analytic on the closed lower half disk.  The default
    is ``w(z) = 1`` with mass ``pi``.
    """

    weight_id: str = "unit"
    weight: Callable = field(default=_unit, repr=False, compare=False)
    radius: float = 1.0

    def __post_init__(self):
        if self.radius != 1.0:
            raise ConfigurationError("contour rules are built at radius 1; scale downstream")
        m = self.mass
        if not np.isfinite(m) or abs(m.real) < 1e-14:
            raise ConfigurationError(f"contour weight needs Re(mass) != 0, got {m}")

    @property
    def mass(self) -> complex:
        return contour_inner_product(self, _unit, _unit)


@dataclass(frozen=True)
class ComplexRecurrence:
    """Coefficients ``mu_0..mu_{n-1}`` and ``nu_0..nu_n`` (``nu_0`` = mass).

    The diagonal of ``M_c`` is ``i mu_k``.  ``residual`` is the largest
    deviation of the sampled Gram matrix ``[eta_j, eta_k]`` from identity.
    """

    mu: np.ndarray
    nu: np.ndarray
    residual: float = 0.0

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def mass(self) -> complex:
        return complex(self.nu[0])

    def truncate(self, n: int) -> "ComplexRecurrence":
        if not 1 <= n <= self.n:
            raise ConfigurationError(f"cannot truncate {self.n} coefficients to {n}")
        return ComplexRecurrence(self.mu[:n].copy(), self.nu[: n + 1].copy(), self.residual)


def _arc_grid(npts):
    x, w = leggauss(npts)
    theta = 1.5 * np.pi + 0.5 * np.pi * x
    return np.exp(1j * theta), 0.5 * np.pi * w


def _segment_grid(npts):
    # even count keeps x = 0 off the grid
    x, w = leggauss(npts + (npts % 2))
    return x, w


def contour_inner_product(m: ContourMeasure, f, g, npts: int | None = None, route: str = "arc") -> complex:
    """Unconjugated product ``int_pi^{2pi} w f g d theta``.

    ``route="arc"`` samples the semicircle directly on a Gauss-Legendre
    theta grid (default ``npts = 200``).  ``route="segment"`` uses the
    collapsed representation on ``[-1, 1]``, valid when ``w f g`` is analytic
    on the closed lower half disk; it is the well-conditioned choice for
    high-degree polynomials.
    """
    npts = 200 if npts is None else int(npts)
    if route == "arc":
        z, wt = _arc_grid(npts)
        return complex(np.sum(wt * m.weight(z) * f(z) * g(z)))
    if route == "segment":
        x, wt = _segment_grid(npts)
        xc = x.astype(complex)
        h = m.weight(xc) * f(xc) * g(xc)
        zero = np.zeros(1, complex)
        h0 = (m.weight(zero) * f(zero) * g(zero))[0]
        return complex(np.pi * h0 - 1j * np.sum(wt * (h - h0) / x))
    raise ConfigurationError(f"unknown route {route!r}")


def complex_recurrence(m: ContourMeasure, n_max: int, npts: int | None = None) -> ComplexRecurrence:
    """Stieltjes sweep for the complex orthonormal family on the semicircle.

    Raises
    ------
    BreakdownError
        if some ``nu_k`` vanishes (the non-Hermitian Lanczos breakdown).
    NumericError
        if ``n_max`` exceeds 128 and the Gram residual passes ``1e-6``.
    """
    if n_max < 1:
        raise ConfigurationError("n_max must be >= 1")
    npts = max(200, 8 * n_max) if npts is None else int(npts)
    x, wt = _segment_grid(npts)
    xc = x.astype(complex)
    wx = m.weight(xc) * wt / x
    w0 = complex(m.weight(np.zeros(1, complex))[0])

    def bracket(f, g, f0, g0):
        h0 = f0 * g0
        return np.pi * w0 * h0 - 1j * (np.sum(wx * f * g) - h0 * np.sum(wx))

    mass = bracket(np.ones_like(xc), np.ones_like(xc), 1.0, 1.0)
    mu = np.empty(n_max, complex)
    nu = np.empty(n_max + 1, complex)
    nu[0] = mass
    scale = abs(mass)
    q_prev, q0_prev = np.zeros_like(xc), 0j
    q, q0 = np.full_like(xc, 1.0 / np.sqrt(mass)), 1.0 / np.sqrt(mass)
    sn_prev = 0j
    samples = [q]
    for k in range(n_max):
        imu = bracket(xc * q, q, 0j, q0)
        mu[k] = imu / 1j
        r = (xc - imu) * q - sn_prev * q_prev
        r0 = -imu * q0 - sn_prev * q0_prev
        nrm = bracket(r, r, r0, r0)
        if not np.isfinite(nrm) or abs(nrm) < 1e-13 * scale:
            raise BreakdownError(k + 1, nrm)
        nu[k + 1] = nrm
        sn = np.sqrt(nrm)
        q_prev, q0_prev = q, q0
        q, q0 = r / sn, r0 / sn
        sn_prev = sn
        samples.append(q)

    residual = 0.0
    if n_max > N_MAX_SAFE:
        # Gram matrix of eta_0..eta_{n-1}; eta_k(0) recomputed from the recurrence
        etas = np.array(samples[:n_max])
        eta0 = eval_eta(ComplexRecurrence(mu, nu), 0j, n_max - 1)
        h0 = np.outer(eta0, eta0)
        gram = np.pi * w0 * h0 - 1j * ((etas * wx) @ etas.T - h0 * np.sum(wx))
        residual = float(np.max(np.abs(gram - np.eye(n_max))))
        if residual > _RESIDUAL_LIMIT:
            raise NumericError(f"complex orthogonality residual {residual:.3e} exceeds {_RESIDUAL_LIMIT:g}")
    return ComplexRecurrence(mu, nu, residual)


def complex_jacobi(r: ComplexRecurrence) -> np.ndarray:
    """Complex symmetric tridiagonal ``M_c``: diagonal ``i mu_k``, off-diagonal principal ``sqrt(nu_k)``."""
    n = r.n
    off = np.sqrt(r.nu[1:n].astype(complex))
    return np.diag(1j * r.mu) + np.diag(off, 1) + np.diag(off, -1)


def contour_rule(r: ComplexRecurrence, mass: complex | None = None) -> QuadratureRule:
    """Nodes and weights of the complex Gauss rule.

    Eigenvectors of ``M_c`` are normalized with the bilinear form
    ``v^T v = 1``; weights are ``mass * v_0^2``.  Nodes are ordered by real
    part, ties broken by imaginary part.
    """
    mass = r.mass if mass is None else complex(mass)
    M = complex_jacobi(r)
    try:
        vals, vecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise DegeneracyError(f"M_c eigenvector matrix condition number {cond:.3e}")
    vtv = np.sum(vecs * vecs, axis=0)
    if np.any(np.abs(vtv) < 1e-12):
        raise DegeneracyError("quasi-null eigenvector (v^T v ~ 0) in M_c")
    v0 = vecs[0] / np.sqrt(vtv)
    order = np.lexsort((vals.imag, vals.real))
    return QuadratureRule(vals[order], (mass * v0 * v0)[order], mass, kind="contour")


def semicircle_rule(n: int, measure: ContourMeasure | None = None) -> QuadratureRule:
    """Convenience: ``contour_rule(complex_recurrence(measure, n))``."""
    measure = ContourMeasure() if measure is None else measure
    return contour_rule(complex_recurrence(measure, n))


def contour_integrate(rule: QuadratureRule, f):
    """``sum_i w_i f(z_i)``, approximating ``int_Gamma w f dz / (i z)``."""
    if rule.kind != "contour":
        raise ConfigurationError("contour_integrate needs a contour-kind rule")
    return np.sum(rule.weights * f(rule.nodes))


def eval_eta(r: ComplexRecurrence, z, k_max: int) -> np.ndarray:
    """Values ``eta_0(z) .. eta_{k_max}(z)`` by forward recursion.

    ``z`` may be a scalar or an array; the result has shape
    ``(k_max + 1,) + shape(z)``.
    """
    if not 0 <= k_max <= r.n:
        raise ConfigurationError(f"k_max={k_max} outside 0..{r.n}")
    z = np.asarray(z, dtype=complex)
    sn = np.sqrt(r.nu.astype(complex))
    out = np.empty((k_max + 1,) + z.shape, complex)
    out[0] = 1.0 / sn[0]
    if k_max >= 1:
        out[1] = (z - 1j * r.mu[0]) * out[0] / sn[1]
    for k in range(1, k_max):
        out[k + 1] = ((z - 1j * r.mu[k]) * out[k] - sn[k] * out[k - 1]) / sn[k + 1]
    return out
