import numpy as np
import pytest

from complexdisc import GaahParams, SpectralDensity, gaah_hamiltonian, highest_excited_state


@pytest.fixture(scope="session")
def benchmark_sd():
    return SpectralDensity(eta=0.1, omega_c=10.0, s=1.0)


@pytest.fixture(scope="session")
def unit_sd():
    return SpectralDensity(eta=1.0, omega_c=1.0, s=1.0)


@pytest.fixture(scope="session")
def ring21():
    p = GaahParams(N_s=21, Delta=1.0)
    H = gaah_hamiltonian(p)
    return p, H, highest_excited_state(H)


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
