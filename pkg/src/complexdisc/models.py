"""Benchmark models: pure dephasing and the single-excitation gAAH lattice.

The lattice couples every site to the same bath modes.  In the
single-excitation sector this gives a dense ``(N_s + N_k)`` square matrix
``[[H_s, G], [G', D]]`` which is diagonalized once and then propagated
spectrally.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .bathmap import BathDiscretization, SpectralDensity, ohmic_J
from .errors import ConfigurationError, NearDefectiveError, NumericError

__all__ = [
    "GOLDEN_BETA",
    "GaahParams",
    "EffectiveHamiltonian",
    "Eigensystem",
    "DephasingValue",
    "gaah_hamiltonian",
    "dephasing_exact",
    "dephasing_discrete_real",
    "dephasing_discrete_complex",
    "build_heff",
    "biorth_eig",
    "propagate",
    "survival",
    "highest_excited_state",
    "pad_to",
]

GOLDEN_BETA = (np.sqrt(5.0) - 1.0) / 2.0
MAX_DIM = 10_000
_COND_LIMIT = 1e12
COUPLINGS = ("transpose", "conjugate")


@dataclass(frozen=True)
class GaahParams:
    N_s: int
    Delta: float
    beta: float = GOLDEN_BETA
    phi: float = np.pi
    a: float = 0.0
    hopping: float = 1.0

    def __post_init__(self):
        if int(self.N_s) != self.N_s or self.N_s < 2:
            raise ConfigurationError(f"N_s must be an integer >= 2, got {self.N_s}")
        if not 0.0 <= self.a < 1.0:
            raise ConfigurationError(f"deformation a must lie in [0, 1), got {self.a}")
        for name in ("Delta", "beta", "phi", "hopping"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    def potential(self) -> np.ndarray:
        n = np.arange(1, self.N_s + 1)
        c = np.cos(2 * np.pi * self.beta * n + self.phi)
        return self.Delta * c / (1.0 - self.a * c)


def gaah_hamiltonian(p: GaahParams) -> np.ndarray:
    """Periodic ring with hopping ``p.hopping`` and the deformed quasiperiodic potential."""
    N = int(p.N_s)
    H = np.diag(p.potential())
    idx = np.arange(N - 1)
    H[idx, idx + 1] += p.hopping
    H[idx + 1, idx] += p.hopping
    # ring closure; for N_s = 2 this doubles the single bond
    H[0, N - 1] += p.hopping
    H[N - 1, 0] += p.hopping
    return H


def highest_excited_state(H: np.ndarray) -> np.ndarray:
    """Top eigenvector of a real symmetric ``H``, gauge fixed so its largest component is positive."""
    _, vecs = np.linalg.eigh(H)
    v = vecs[:, -1]
    return v * np.sign(v[np.argmax(np.abs(v))])


# -- dephasing ---------------------------------------------------------------


@dataclass(frozen=True)
class DephasingValue:
    """``-ln L`` together with how it was obtained (``"analytic"`` or ``"numeric"``)."""

    value: np.ndarray
    method: str


def _dephasing_quad(sd: SpectralDensity, t: float) -> float:
    if t == 0.0:
        return 0.0

    def f(w):
        # (1 - cos wt)/w^2 written to stay accurate as w -> 0
        return ohmic_J(sd, w) * 2.0 * np.sin(0.5 * w * t) ** 2 / (w * w) if w > 0 else 0.0

    upper = 60.0 * sd.omega_c
    val, _ = integrate.quad(f, 0.0, upper, limit=2000, epsabs=1e-13, epsrel=1e-11)
    return float(val)


def dephasing_exact(t, sd: SpectralDensity | None = None) -> DephasingValue:
    """Continuum decoherence exponent ``-ln L(t)`` at zero temperature.

    For ``eta = omega_c = s = 1`` this is ``ln(1 + t^2) / 2``.  Other
    densities are integrated numerically and tagged ``"numeric"``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ConfigurationError("time must be >= 0")
    sd = SpectralDensity(1.0, 1.0, 1.0) if sd is None else sd
    if (sd.eta, sd.omega_c, sd.s) == (1.0, 1.0, 1.0):
        return DephasingValue(0.5 * np.log1p(t_arr**2), "analytic")
    vals = np.vectorize(lambda x: _dephasing_quad(sd, float(x)), otypes=[float])(t_arr)
    return DephasingValue(vals, "numeric")


def dephasing_discrete_real(bath: BathDiscretization, t):
    """``sum_i c_i^2 (1 - cos(E_i t)) / E_i^2`` for a real star bath."""
    if bath.kind != "real":
        raise ConfigurationError("dephasing_discrete_real needs a real bath")
    t = np.asarray(t, dtype=float)
    E = bath.energies
    arg = 0.5 * np.multiply.outer(t, E)
    return (2.0 * np.sin(arg) ** 2 / E**2) @ (bath.couplings**2)


def dephasing_discrete_complex(bath: BathDiscretization, t, form: str = "analytic"):
    """Decoherence exponent carried by a complex star bath; callers plot ``abs``.

    ``form="analytic"`` continues each exponential of ``cos(w t)`` into the
    half plane where it decays: the ``e^{-iwt}`` half uses the nodes ``z_j``
    with weights ``c_j^2``, the ``e^{+iwt}`` half their mirror images, which
    makes the sum ``Re sum_j c_j^2 (1 - e^{-i z_j t}) / z_j^2``.

    ``form="literal"`` evaluates ``sum_j |c_j|^2 (1 - cos(z_j t)) / z_j^2``
    as written.  Since ``|cos z t|`` grows like ``e^{|Im z| t}`` this
    diverges for long times and is kept only for comparison.
    """
    if bath.kind != "complex":
        raise ConfigurationError("dephasing_discrete_complex needs a complex bath")
    t = np.asarray(t, dtype=float)
    z = bath.energies
    zt = np.multiply.outer(t, z)
    if form == "analytic":
        vals = (-np.expm1(-1j * zt) / z**2) @ (bath.couplings**2)
        return vals.real + 0j
    if form == "literal":
        with np.errstate(over="ignore", invalid="ignore"):
            return (2.0 * np.sin(0.5 * zt) ** 2 / z**2) @ (np.abs(bath.couplings) ** 2)
    raise ConfigurationError(f"unknown dephasing form {form!r}")


# -- effective Hamiltonian -----------------------------------------------------


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Single-excitation Hamiltonian ``[[H_s, G], [G', D]]``; system block first."""

    matrix: np.ndarray
    N_s: int
    N_k: int
    coupling: str

    @property
    def dim(self) -> int:
        return self.N_s + self.N_k


def build_heff(system: np.ndarray, bath: BathDiscretization, coupling: str = "transpose") -> EffectiveHamiltonian:
    """Assemble the site-plus-mode matrix for a bath shared by every site.

    Row ``n`` (site), column ``N_s + j`` (mode) holds ``c_j``.  The reverse
    entry is ``c_j`` again for ``coupling="transpose"`` (a complex symmetric
    matrix, which keeps the exchanged kernel analytic in ``c_j^2``) or
    ``conj(c_j)`` for ``coupling="conjugate"``.  For real baths both agree.
    """
    system = np.asarray(system)
    if system.ndim != 2 or system.shape[0] != system.shape[1]:
        raise ConfigurationError("system Hamiltonian must be square")
    if coupling not in COUPLINGS:
        raise ConfigurationError(f"coupling must be one of {COUPLINGS}, got {coupling!r}")
    Ns, Nk = system.shape[0], bath.N_k
    dim = Ns + Nk
    if dim > MAX_DIM:
        raise ConfigurationError(f"effective Hamiltonian dimension {dim} exceeds {MAX_DIM}")
    c = np.asarray(bath.couplings, dtype=complex)
    back = np.conj(c) if coupling == "conjugate" else c
    M = np.zeros((dim, dim), dtype=complex)
    M[:Ns, :Ns] = system
    M[Ns:, Ns:] = np.diag(bath.energies)
    M[:Ns, Ns:] = c[None, :]
    M[Ns:, :Ns] = back[:, None]
    return EffectiveHamiltonian(M, Ns, Nk, coupling)


@dataclass(frozen=True)
class Eigensystem:
    """Eigenvalues with right vectors ``V`` (columns) and left vectors ``W`` (rows), ``W V = I``."""

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition: float = field(default=1.0)

    @property
    def dim(self) -> int:
        return len(self.values)

    def residual(self) -> float:
        return float(np.max(np.abs(self.left @ self.right - np.eye(self.dim))))


def biorth_eig(H) -> Eigensystem:
    """Biorthonormal eigendecomposition ordered by real part, then imaginary part.

    Hermitian input goes through ``eigh`` so that ``W = V^H`` exactly.
    Otherwise the left vectors are the rows of ``inv(V)``.
    """
    M = H.matrix if isinstance(H, EffectiveHamiltonian) else np.asarray(H)
    if np.allclose(M, M.conj().T, rtol=0.0, atol=0.0):
        vals, V = np.linalg.eigh(M)
        return Eigensystem(vals.astype(complex), V.astype(complex), V.conj().T.astype(complex), 1.0)
    try:
        vals, V = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise NearDefectiveError(f"eigenvector matrix condition number {cond:.3e} exceeds {_COND_LIMIT:g}")
    order = np.lexsort((vals.imag, vals.real))
    vals, V = vals[order], V[:, order]
    W = np.linalg.inv(V)
    return Eigensystem(vals, V, W, cond)


def propagate(e: Eigensystem, psi0, t):
    """``V diag(exp(-i E t)) W psi0``; an array of times gives one column per time."""
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (e.dim,):
        raise ConfigurationError(f"psi0 has shape {psi0.shape}, expected ({e.dim},)")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ConfigurationError("propagation to negative times is refused")
    coeff = e.left @ psi0
    if t_arr.ndim == 0:
        if t_arr == 0:
            return psi0.copy()
        return e.right @ (np.exp(-1j * e.values * t_arr) * coeff)
    out = e.right @ (np.exp(-1j * np.outer(e.values, t_arr)) * coeff[:, None])
    out[:, t_arr == 0] = psi0[:, None]
    return out


def pad_to(vec, dim: int) -> np.ndarray:
    """Embed a system-block vector into the full space, zeros on the bath block."""
    vec = np.asarray(vec, dtype=complex)
    if vec.shape[0] > dim:
        raise ConfigurationError("vector longer than target dimension")
    return np.concatenate([vec, np.zeros(dim - vec.shape[0], complex)])


def survival(e: Eigensystem, target, psi0, t):
    """``|target^H psi(t)|^2``; system-block vectors are zero padded."""
    target = pad_to(target, e.dim)
    psi0 = pad_to(psi0, e.dim)
    if not np.isclose(np.vdot(target, target).real, 1.0, atol=1e-10):
        raise ConfigurationError("target must be normalized")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ConfigurationError("propagation to negative times is refused")
    # project once: amplitude = (target^H V) diag(phase) (W psi0)
    row = target.conj() @ e.right
    coeff = e.left @ psi0
    phase = np.exp(-1j * np.multiply.outer(t_arr, e.values))
    return np.abs(phase @ (row * coeff)) ** 2
