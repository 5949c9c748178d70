"""Survival of the top eigenstate of a quasiperiodic ring coupled to a bath.

The bath is replaced by N_k complex modes, folded into a non-Hermitian
effective Hamiltonian, and propagated with its biorthogonal eigensystem.
The exact Volterra integro-differential solution serves as the reference;
it takes about a minute on one core.
"""

import sys

import numpy as np

import complexdisc as cd

Delta = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
sd = cd.SpectralDensity(eta=0.1, omega_c=10.0, s=1.0)
p = cd.GaahParams(N_s=21, Delta=Delta)
H = cd.gaah_hamiltonian(p)
psi = cd.highest_excited_state(H)
t = np.arange(0.0, 200.0 + 1e-9, 0.5)

curves = {}
for R in (2.0, 6.0):
    heff = cd.build_heff(H, cd.star_env_complex(sd, 40, R))
    curves[R] = cd.survival(cd.biorth_eig(heff.matrix), psi, psi, t)

ref = cd.volterra_solve(p, sd, psi, cd.VolterraConfig(t_max=200.0))
exact = np.abs(ref.amplitudes @ psi.conj()) ** 2

late = t >= 20
for R, s in curves.items():
    print(f"Delta={Delta}, N_k=40, R={R}: max |P - P_oracle| on [20, 200] = {np.max(np.abs(s - exact)[late]):.3f}")
print("   t   oracle   R=2     R=6")
for i in range(0, len(t), 40):
    print(f"{t[i]:5.0f}  {exact[i]:.4f}  {curves[2.0][i]:.4f}  {curves[6.0][i]:.4f}")
