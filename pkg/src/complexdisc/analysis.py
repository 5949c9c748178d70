"""Derived observables: averaged survival, mobility edges, phase diagrams, recurrence onset."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import trapezoid

from .bathmap import SpectralDensity, star_env_complex
from .errors import ConfigurationError
from .models import Eigensystem, GaahParams, biorth_eig, build_heff, gaah_hamiltonian

__all__ = [
    "AspResult",
    "asp",
    "asp_states",
    "mobility_edge",
    "classify",
    "phase_diagram",
    "recurrence_time",
    "inverse_participation",
]


@dataclass(frozen=True)
class AspResult:
    Delta: float
    n: int
    E_n: float
    E_c: float | None
    side: str
    asp: float
    window: tuple[float, float, float]


def _window(t0, t1, dt):
    if not (t1 > t0 >= 0) or dt <= 0:
        raise ConfigurationError(f"need t1 > t0 >= 0 and dt > 0, got ({t0}, {t1}, {dt})")
    count = int(round((t1 - t0) / dt))
    if not np.isclose(t0 + count * dt, t1, rtol=0, atol=1e-9 * max(1.0, t1)):
        raise ConfigurationError("window length must be a multiple of dt")
    return t0 + dt * np.arange(count + 1)


def asp_states(e: Eigensystem, states, t0: float = 100.0, t1: float = 1000.0, dt: float = 0.5) -> np.ndarray:
    """Averaged survival ``(1/(t1-t0)) int |<s|psi_s(t)>|^2`` for each column of ``states``.

    Columns may be system-block vectors; they are zero padded.
    """
    states = np.asarray(states, dtype=complex)
    if states.ndim == 1:
        states = states[:, None]
    if states.shape[0] > e.dim:
        raise ConfigurationError("state dimension exceeds the eigensystem")
    full = np.zeros((e.dim, states.shape[1]), complex)
    full[: states.shape[0]] = states
    times = _window(t0, t1, dt)
    # amplitude_s(t) = sum_k (s^H V)_k (W s)_k e^{-i E_k t}
    weights = (full.conj().T @ e.right) * (e.left @ full).T
    amp = weights @ np.exp(-1j * np.outer(e.values, times))
    return trapezoid(np.abs(amp) ** 2, times, axis=1) / (t1 - t0)


def asp(e: Eigensystem, state, t0: float = 100.0, t1: float = 1000.0, dt: float = 0.5) -> float:
    return float(asp_states(e, state, t0, t1, dt)[0])


def mobility_edge(p: GaahParams) -> float | None:
    """``E_c = sign(t)(2|t| - |Delta|)/a`` with ``t`` the hopping amplitude; ``None`` at ``a = 0``."""
    if p.a == 0:
        return None
    lam = p.hopping
    return float(np.sign(lam) * (2 * abs(lam) - abs(p.Delta)) / p.a)


def classify(E_n: float, E_c: float | None) -> str:
    if E_c is None:
        return "none"
    return "extended" if E_n < E_c else "localized"


def _diagram_point(args):
    p, bath, coupling, window = args
    H = gaah_hamiltonian(p)
    energies, U = np.linalg.eigh(H)
    e = biorth_eig(build_heff(H, bath, coupling))
    values = asp_states(e, U, *window)
    E_c = mobility_edge(p)
    return [
        AspResult(float(p.Delta), n, float(energies[n]), E_c, classify(energies[n], E_c), float(values[n]), tuple(window))
        for n in range(p.N_s)
    ]


def phase_diagram(
    base: GaahParams,
    deltas,
    sd: SpectralDensity,
    N_k: int = 40,
    R: float = 2.0,
    window=(100.0, 1000.0, 0.5),
    coupling: str = "transpose",
    workers: int = 1,
) -> list[AspResult]:
    """ASP of every closed-system eigenstate for each ``Delta`` in ``deltas``.

    The bath is the complex star discretization ``(N_k, R)`` of ``sd``.

    Rows come back sorted by ``(Delta, n)``, with ``n`` the index of
    ``E_n`` in ascending order; the output does not depend on ``workers``.
    """
    deltas = sorted({float(d) for d in np.atleast_1d(deltas)})
    if not deltas:
        raise ConfigurationError("Delta grid is empty")
    bath = star_env_complex(sd, N_k, R)
    jobs = [(replace(base, Delta=d), bath, coupling, tuple(window)) for d in deltas]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_diagram_point, jobs))
    else:
        chunks = [_diagram_point(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: (r.Delta, r.n))


def recurrence_time(times, exact, approx, tol: float = 0.02, persist: int = 5):
    """First time where ``|approx - exact| / |exact|`` exceeds ``tol`` for ``persist`` samples running.

    Samples with ``exact == 0`` compare absolutely.  Returns ``None`` if
    the deviation never persists.
    """
    times = np.asarray(times, dtype=float)
    exact = np.asarray(exact)
    approx = np.asarray(approx)
    if not (times.shape == exact.shape == approx.shape) or times.ndim != 1:
        raise ConfigurationError("times, exact and approx must be aligned 1-D arrays")
    scale = np.abs(exact)
    diff = np.abs(approx - exact)
    rel = np.divide(diff, scale, out=diff.astype(float), where=scale > 0)
    bad = rel > tol
    run = 0
    for i, flag in enumerate(bad):
        run = run + 1 if flag else 0
        if run == persist:
            return float(times[i - persist + 1])
    return None


def inverse_participation(vectors) -> np.ndarray:
    """``sum_i |v_i|^4`` per column of normalized eigenvectors."""
    v = np.asarray(vectors)
    if v.ndim == 1:
        v = v[:, None]
    p = np.abs(v) ** 2
    p = p / p.sum(axis=0)
    return np.sum(p**2, axis=0)
