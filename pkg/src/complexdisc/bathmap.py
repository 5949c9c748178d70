"""Ohmic spectral densities and their discrete bath representations.

With ``h(x) = omega_c x`` the physical frequency of a mode at reduced
position ``x`` is ``omega_c x`` and ``g(x)^2`` is the coupling density in
the reduced variable.  The real route samples ``g^2`` with a Gauss rule on
``[0, inf)``; the complex route samples it on the translated semicircle
``R (1 + zeta)``, which by Cauchy's theorem stands in for the segment
``[0, 2R]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gamma

from .cquad import ContourMeasure, complex_jacobi, complex_recurrence, semicircle_rule
from .errors import ConfigurationError
from .polyquad import RealMeasure, gauss_rule, jacobi_matrix, stieltjes_recurrence

__all__ = [
    "SpectralDensity",
    "BathDiscretization",
    "ohmic_J",
    "hg_choice",
    "chain_env_real",
    "chain_env_complex",
    "star_env_real",
    "star_env_complex",
    "discrete_kernel",
]


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic family ``J(w) = eta w (w / omega_c)^(s-1) exp(-w / omega_c)``."""

    eta: float
    omega_c: float
    s: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.eta) or self.eta < 0:
            raise ConfigurationError(f"eta must be >= 0, got {self.eta}")
        if not np.isfinite(self.omega_c) or self.omega_c <= 0:
            raise ConfigurationError(f"omega_c must be > 0, got {self.omega_c}")
        if not np.isfinite(self.s) or self.s <= 0:
            raise ConfigurationError(f"s must be > 0, got {self.s}")

    @property
    def reorganization_mass(self) -> float:
        """``int_0^inf g(x)^2 dx = eta omega_c^2 Gamma(s + 1)``, equal to ``K(0)``."""
        return float(self.eta * self.omega_c**2 * gamma(self.s + 1))


@dataclass(frozen=True)
class BathDiscretization:
    """Star-form bath: mode energies and system-to-mode couplings."""

    energies: np.ndarray
    couplings: np.ndarray
    N_k: int
    R: float | None
    omega_c: float
    eta: float
    s: float
    kind: str

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise ConfigurationError(f"bath kind must be real or complex, got {self.kind!r}")
        if len(self.energies) != self.N_k or len(self.couplings) != self.N_k:
            raise ConfigurationError("energies and couplings must both have N_k entries")

    @property
    def is_complex(self) -> bool:
        return self.kind == "complex"


def ohmic_J(sd: SpectralDensity, omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ConfigurationError("ohmic_J is defined for omega >= 0")
    # omega^s form stays finite at omega = 0 when s < 1
    return sd.eta * sd.omega_c ** (1.0 - sd.s) * omega**sd.s * np.exp(-omega / sd.omega_c)


def hg_choice(sd: SpectralDensity) -> tuple[Callable, Callable]:
    """The factorization ``h(x) = omega_c x``, ``g(x) = sqrt(eta) omega_c x^(s/2) e^(-x/2)``.

    ``g`` accepts complex arguments and then uses the principal branch of
    ``x^(s/2)``.
    """
    wc, pref, half_s = sd.omega_c, np.sqrt(sd.eta) * sd.omega_c, 0.5 * sd.s

    def h(x):
        return wc * np.asarray(x)

    def g(x):
        x = np.asarray(x)
        if np.iscomplexobj(x):
            return pref * np.power(x, half_s) * np.exp(-0.5 * x)
        return pref * x**half_s * np.exp(-0.5 * x)

    return h, g


def _check_nk(N_k):
    if int(N_k) != N_k or N_k < 1:
        raise ConfigurationError(f"N_k must be a positive integer, got {N_k}")
    return int(N_k)


def chain_env_real(sd: SpectralDensity, N_k: int) -> tuple[np.ndarray, float]:
    """Chain hopping matrix ``omega_c * J_{N_k}`` for ``w = g^2`` and end coupling ``kappa_0``."""
    N_k = _check_nk(N_k)
    r = stieltjes_recurrence(RealMeasure.laguerre(1.0, sd.s), N_k)
    return sd.omega_c * jacobi_matrix(r), float(np.sqrt(sd.reorganization_mass))


def chain_env_complex(N_k: int, omega_c: float = 1.0) -> np.ndarray:
    """``omega_c * M_c`` for the unit contour weight (untranslated)."""
    N_k = _check_nk(N_k)
    return omega_c * complex_jacobi(complex_recurrence(ContourMeasure(), N_k))


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


# rules are cached per size; callers only ever read them
@lru_cache(maxsize=64)
def _unit_rule(N_k: int):
    rule = semicircle_rule(N_k)
    return _frozen(rule.nodes), _frozen(rule.weights)


@lru_cache(maxsize=64)
def _laguerre_rule(N_k: int, s: float):
    rule = gauss_rule(RealMeasure.laguerre(1.0, s), N_k)
    return _frozen(rule.nodes), _frozen(rule.weights)


def star_env_real(sd: SpectralDensity, N_k: int) -> BathDiscretization:
    """Gauss nodes ``x_i`` and weights ``w_i`` of ``g^2``: energies ``omega_c x_i``, couplings ``sqrt(w_i)``."""
    N_k = _check_nk(N_k)
    x, w = _laguerre_rule(N_k, float(sd.s))
    couplings = np.sqrt(sd.eta * sd.omega_c**2 * w)
    return BathDiscretization(sd.omega_c * x, couplings, N_k, None, sd.omega_c, sd.eta, sd.s, "real")


def star_env_complex(sd: SpectralDensity, N_k: int, R: float) -> BathDiscretization:
    """Complex star bath on the semicircle of radius ``R`` centred at ``R``.

    With unit-contour nodes ``zeta_j`` and weights ``w_j``, energies are
    ``omega_c R (1 + zeta_j)`` and couplings
    ``sqrt(i R zeta_j) sqrt(w_j) g(R (1 + zeta_j))`` (principal roots).
    """
    N_k = _check_nk(N_k)
    if not np.isfinite(R) or R <= 0:
        raise ConfigurationError(f"R must be > 0, got {R}")
    zeta, w = _unit_rule(N_k)
    _, g = hg_choice(sd)
    x = R * (1.0 + zeta)
    couplings = np.sqrt(1j * R * zeta) * np.sqrt(w) * g(x)
    return BathDiscretization(sd.omega_c * x, couplings, N_k, float(R), sd.omega_c, sd.eta, sd.s, "complex")


def discrete_kernel(bath: BathDiscretization, t):
    """``sum_j c_j^2 exp(-i E_j t)``: the memory kernel carried by the discrete bath."""
    t = np.asarray(t, dtype=float)
    phase = np.exp(-1j * np.multiply.outer(t, bath.energies))
    return phase @ (bath.couplings**2)
