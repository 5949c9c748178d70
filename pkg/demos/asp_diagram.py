"""Averaged survival across the spectrum of a deformed quasiperiodic ring.

With a != 0 the closed ring has a mobility edge E_c: states above it are
localized and states below it extended.  Once the bath is attached the
extended states keep most of their initial weight while the localized ones
leak into the environment.  The sweep prints one row per Delta.
"""

import numpy as np

import complexdisc as cd

sd = cd.SpectralDensity(eta=0.1, omega_c=10.0, s=1.0)
base = cd.GaahParams(N_s=21, Delta=1.0, a=0.5)
rows = cd.phase_diagram(base, np.arange(0.5, 3.01, 0.5), sd, N_k=40, R=2.0)

print(" Delta   E_c     mean ASP (localized)  mean ASP (extended)")
for d in sorted({r.Delta for r in rows}):
    sel = [r for r in rows if r.Delta == d]
    loc = [r.asp for r in sel if r.side == "localized"]
    ext = [r.asp for r in sel if r.side == "extended"]
    mean = lambda xs: f"{np.mean(xs):.3f} ({len(xs):2d})" if xs else "   -      "
    print(f"{d:5.2f}  {sel[0].E_c:+7.3f}   {mean(loc):>18}   {mean(ext):>18}")
