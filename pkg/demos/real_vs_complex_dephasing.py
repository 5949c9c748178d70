"""Why move the quadrature nodes off the real axis?

A real Gauss discretization of an ohmic bath reproduces the decoherence
exponent -ln L(t) = ln(1 + t^2)/2 only until the finite set of real mode
frequencies rephases.  Putting the nodes on a lower-half-plane contour
gives modes that decay, so the discrete bath stops recurring.
"""

import numpy as np

import complexdisc as cd

unit = cd.SpectralDensity(eta=1.0, omega_c=1.0, s=1.0)
times = np.arange(0.1, 400.0, 0.1)
exact = cd.dephasing_exact(times, unit).value

print("real Gauss-Laguerre discretization")
for n in (50, 100, 1000):
    approx = cd.dephasing_discrete_real(cd.star_env_real(unit, n), times)
    onset = cd.recurrence_time(times, exact, approx, tol=0.01)
    print(f"  N_k={n:5d}: tracks the continuum to 1% until t = {onset}")

print("complex contour discretization")
for n, R in ((40, 2.0), (80, 2.0)):
    approx = np.abs(cd.dephasing_discrete_complex(cd.star_env_complex(unit, n, R), times))
    err = np.max(np.abs(approx - exact) / exact)
    print(f"  N_k={n:3d}, R={R}: max relative error over t <= 400 is {err:.3f}")
