"""Gauss rules on the lower unit semicircle.

Orthogonal polynomials for the bilinear form [f, g] = int f g d(theta)
over the arc z = e^{i theta}, theta in [pi, 2 pi], give complex nodes
strictly inside the lower half disc.  The weights add up to the length of
the arc, pi.
"""

import numpy as np

import complexdisc as cd

for n in (2, 10, 40):
    rule = cd.semicircle_rule(n)
    print(f"n={n:3d}  sum w = {complex(rule.weights.sum()):.12f}  "
          f"max Im z = {rule.nodes.imag.max():+.3e}  max |z| = {np.abs(rule.nodes).max():.4f}")

# the rule integrates polynomials of degree 2n-1 exactly along the arc
rule = cd.semicircle_rule(10)
for k in (0, 5, 19):
    exact = np.pi if k == 0 else (1 - (-1) ** k) / (1j * k)
    print(f"z^{k:<2d}: rule {complex(np.sum(rule.weights * rule.nodes**k)):.12f}  exact {exact:.12f}")
