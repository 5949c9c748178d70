import numpy as np
import pytest
from scipy import integrate

from complexdisc import (
    ConfigurationError,
    GaahParams,
    SpectralDensity,
    StepSizeError,
    VolterraConfig,
    closed_evolve,
    gaah_hamiltonian,
    highest_excited_state,
    memory_kernel,
    ohmic_J,
    truncated_kernel,
    volterra_solve,
)

from shared import BENCH, oracle_run


def test_kernel_examples():
    assert memory_kernel(BENCH, 0.0) == pytest.approx(10.0, rel=1e-15)
    assert memory_kernel(SpectralDensity(1.0, 1.0), 1.0) == pytest.approx(-0.5j, abs=1e-15)
    t = np.linspace(0, 100, 2001)
    assert np.all(np.diff(np.abs(memory_kernel(BENCH, t))) < 0)
    with pytest.raises(ConfigurationError):
        memory_kernel(BENCH, -1.0)
    with pytest.raises(ConfigurationError):
        memory_kernel(BENCH, 1.0, mode="fft")


@pytest.mark.parametrize("sd", [BENCH, SpectralDensity(1.0, 1.0), SpectralDensity(0.2, 3.0, 0.5), SpectralDensity(0.1, 5.0, 2.0)])
def test_kernel_numeric_matches_closed_form(sd):
    t = np.linspace(0.0, 100.0, 26)
    a = memory_kernel(sd, t)
    n = memory_kernel(sd, t, mode="numeric")
    assert np.max(np.abs(a - n) / np.abs(a)) < 1e-8


@pytest.mark.parametrize("s", [1.0, 2.0, 0.5])
def test_truncated_kernel(s):
    sd = SpectralDensity(0.1, 10.0, s)
    for t in (0.0, 0.7, 12.0):
        re, _ = integrate.quad(lambda w: ohmic_J(sd, w) * np.cos(w * t), 0, 40.0, limit=500, epsabs=1e-12, epsrel=1e-11)
        im, _ = integrate.quad(lambda w: -ohmic_J(sd, w) * np.sin(w * t), 0, 40.0, limit=500, epsabs=1e-12, epsrel=1e-11)
        assert truncated_kernel(sd, t, 40.0) == pytest.approx(complex(re, im), rel=1e-9, abs=1e-12)
    far = truncated_kernel(sd, np.array([0.0, 3.0]), 800.0)
    np.testing.assert_allclose(far, memory_kernel(sd, np.array([0.0, 3.0])), rtol=1e-10)
    with pytest.raises(ConfigurationError):
        truncated_kernel(sd, 1.0, 0.0)


def test_closed_evolve():
    H = gaah_hamiltonian(GaahParams(N_s=2, Delta=0.0))
    psi0 = np.array([1.0, 0.0])
    t = np.linspace(0, 5, 51)
    out = closed_evolve(H, psi0, t)
    assert out.shape == (51, 2)
    np.testing.assert_allclose(np.abs(out[:, 0]) ** 2, np.cos(2 * t) ** 2, atol=1e-14)
    np.testing.assert_allclose(closed_evolve(H, psi0, 0.0), psi0)
    H21 = gaah_hamiltonian(GaahParams(N_s=21, Delta=1.3))
    v = highest_excited_state(H21)
    np.testing.assert_allclose(np.abs(closed_evolve(H21, v, 7.5)), np.abs(v), atol=1e-13)
    with pytest.raises(ConfigurationError):
        closed_evolve(np.array([[0.0, 1.0], [2.0, 0.0]]), psi0, 1.0)


def test_config_validation():
    for kw in (
        {"dt": 0.0},
        {"dt": 0.003, "dt_out": 0.5},
        {"t_max": 200.3},
        {"dt": 1e-5, "t_max": 200.0, "dt_out": 0.5},
        {"kernel_mode": "fft"},
        {"memory_rule": "simpson"},
        {"bath": "shared"},
    ):
        with pytest.raises(ConfigurationError):
            VolterraConfig(**kw)


def test_initial_state_checks():
    p = GaahParams(N_s=5, Delta=1.0)
    with pytest.raises(ConfigurationError):
        volterra_solve(p, BENCH, np.ones(4) / 2)
    with pytest.raises(ConfigurationError):
        volterra_solve(p, BENCH, np.ones(5))


def test_zero_coupling_matches_closed_evolution():
    # with K = 0 the exponential steps are exact for any dt
    p = GaahParams(N_s=21, Delta=1.0)
    H = gaah_hamiltonian(p)
    es = highest_excited_state(H)
    psi0 = np.zeros(21)
    psi0[10] = 1.0  # a site state, so the amplitudes actually move
    for a0 in (es, psi0):
        res = volterra_solve(p, SpectralDensity(0.0, 10.0), a0, VolterraConfig(dt=0.01, t_max=200.0))
        assert np.max(np.abs(res.amplitudes - closed_evolve(H, a0, res.times))) < 1e-8


def test_short_horizon_self_convergence():
    p = GaahParams(N_s=21, Delta=2.5)
    es = highest_excited_state(gaah_hamiltonian(p))
    res = volterra_solve(p, BENCH, es, VolterraConfig(t_max=20.0, check_convergence=True))
    assert res.halving_deviation < 1e-4


def test_step_size_error():
    p = GaahParams(N_s=8, Delta=1.0)
    es = highest_excited_state(gaah_hamiltonian(p))
    with pytest.raises(StepSizeError):
        volterra_solve(p, BENCH, es, VolterraConfig(dt=0.1, t_max=5.0, extrapolate=False, check_convergence=True, convergence_tol=1e-9))


def test_memory_rules_agree_as_dt_shrinks():
    p = GaahParams(N_s=8, Delta=1.0)
    es = highest_excited_state(gaah_hamiltonian(p))
    prod = volterra_solve(p, BENCH, es, VolterraConfig(dt=0.001, t_max=5.0))
    gaps = []
    for dt in (0.004, 0.002):
        trap = volterra_solve(p, BENCH, es, VolterraConfig(dt=dt, t_max=5.0, memory_rule="trapezoid"))
        gaps.append(np.max(np.abs(trap.amplitudes - prod.amplitudes)))
    assert gaps[1] < gaps[0] < 0.05


def test_independent_baths():
    p = GaahParams(N_s=8, Delta=1.0, a=0.4)
    es = highest_excited_state(gaah_hamiltonian(p))
    common = volterra_solve(p, BENCH, es, VolterraConfig(dt=0.005, t_max=10.0))
    indep = volterra_solve(p, BENCH, es, VolterraConfig(dt=0.005, t_max=10.0, bath="independent"))
    assert np.max(np.abs(common.amplitudes - indep.amplitudes)) > 1e-2
    norms = np.sum(np.abs(indep.amplitudes) ** 2, axis=1)
    assert np.all(np.diff(norms) <= 1e-10) and norms[-1] < 0.99


@pytest.mark.slow
def test_benchmark_decay_without_revival():
    res, es = oracle_run(1.0)
    surv = np.abs(res.amplitudes @ es) ** 2
    norms = np.sum(np.abs(res.amplitudes) ** 2, axis=1)
    assert surv[0] == pytest.approx(1.0, abs=1e-12)
    assert surv[-1] < 0.5
    # no revival: once the excitation has leaked below one half it never
    # returns there; the bounded beating around the plateau is real dynamics
    first_low = int(np.argmax(surv < 0.5))
    assert first_low > 0
    assert np.max(surv[first_low:]) < 0.5
    # total probability is conserved, so the system population stays below
    # its initial value; it need not be monotone (bath backflow)
    assert np.all(norms <= 1.0 + 1e-8)
    assert norms[-1] < 0.9
